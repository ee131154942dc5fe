//! File formats: packed `.praw` tensors, binary PGM mosaics and their
//! `.meta` sidecars.
//!
//! `.praw` layout (all little-endian):
//!
//! ```text
//! "PRAW" | u32 width | u32 height | u32 channels (= 4) | u32 reserved (= 0)
//! width * height * 4 f32 samples, channel-last, row-major
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use super::{CfaPattern, MosaicImage, PackedRaw, SensorMeta};
use crate::error::{Error, Result};
use crate::kv;

pub const PRAW_MAGIC: &[u8; 4] = b"PRAW";
const PRAW_HEADER_LEN: usize = 20;

pub fn encode_praw(p: &PackedRaw) -> Vec<u8> {
    let n = p.plane_len();
    let mut out = Vec::with_capacity(PRAW_HEADER_LEN + n * 16);
    out.extend_from_slice(PRAW_MAGIC);
    for v in [p.width() as u32, p.height() as u32, 4, 0] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let planes: Vec<&[f32]> = p.planes().collect();
    for i in 0..n {
        for plane in &planes {
            out.extend_from_slice(&plane[i].to_le_bytes());
        }
    }
    out
}

pub fn decode_praw(bytes: &[u8]) -> Result<PackedRaw> {
    const WHAT: &str = ".praw";
    if bytes.len() < PRAW_HEADER_LEN || &bytes[..4] != PRAW_MAGIC {
        return Err(Error::format(WHAT, "missing PRAW magic"));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
    let (w, h, ch, reserved) = (word(0) as usize, word(1) as usize, word(2), word(3));
    if ch != 4 {
        return Err(Error::format(WHAT, format!("channel count {ch}, expected 4")));
    }
    if reserved != 0 {
        return Err(Error::format(WHAT, "reserved header word is nonzero"));
    }
    let n = w
        .checked_mul(h)
        .ok_or_else(|| Error::format(WHAT, "dimensions overflow"))?;
    let body = &bytes[PRAW_HEADER_LEN..];
    if body.len() != n * 16 {
        return Err(Error::format(
            WHAT,
            format!("payload is {} bytes, expected {}", body.len(), n * 16),
        ));
    }
    let mut data = vec![0.0f32; n * 4];
    for (i, px) in body.chunks_exact(16).enumerate() {
        for c in 0..4 {
            data[c * n + i] = f32::from_le_bytes(px[4 * c..4 * c + 4].try_into().unwrap());
        }
    }
    PackedRaw::from_planar(w, h, data)
}

pub fn write_praw(path: impl AsRef<Path>, p: &PackedRaw) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_praw(p)).map_err(|e| Error::io(path, e))
}

pub fn read_praw(path: impl AsRef<Path>) -> Result<PackedRaw> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_praw(&bytes)
}

/// Binary PGM (P5). Samples are big-endian u16 when maxval ≥ 256, bytes
/// otherwise.
pub fn encode_pgm(width: usize, height: usize, maxval: u32, data: &[u16]) -> Result<Vec<u8>> {
    if maxval == 0 || maxval > 65535 {
        return Err(Error::invalid(format!("PGM maxval {maxval} outside 1..=65535")));
    }
    if data.len() != width * height {
        return Err(Error::Shape {
            expected: format!("{} samples", width * height),
            got: format!("{} samples", data.len()),
        });
    }
    let mut out = format!("P5\n{width} {height}\n{maxval}\n").into_bytes();
    if maxval < 256 {
        for &v in data {
            let b = u8::try_from(v)
                .map_err(|_| Error::invalid(format!("sample {v} does not fit 8-bit PGM")))?;
            out.push(b);
        }
    } else {
        out.reserve(data.len() * 2);
        for &v in data {
            out.extend_from_slice(&v.to_be_bytes());
        }
    }
    Ok(out)
}

/// Parses the three numeric fields of a binary PNM header with the given
/// magic. Returns them with the offset of the first raster byte.
pub(crate) fn pnm_header(bytes: &[u8], magic: &[u8; 2], what: &'static str) -> Result<([u32; 3], usize)> {
    if bytes.len() < 2 || &bytes[..2] != magic {
        return Err(Error::format(
            what,
            format!("missing {} magic", String::from_utf8_lossy(magic)),
        ));
    }
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in &mut fields {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::format(what, "bad header field"))?;
    }
    // exactly one whitespace byte separates header from raster
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::format(what, "header not terminated by whitespace"));
    }
    Ok((fields, pos + 1))
}

/// Decodes a P5 image, returning `(width, height, maxval, samples)`.
pub fn decode_pgm(bytes: &[u8]) -> Result<(usize, usize, u32, Vec<u16>)> {
    const WHAT: &str = "PGM";
    let (fields, pos) = pnm_header(bytes, b"P5", WHAT)?;
    let [w, h, maxval] = fields;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::format(WHAT, format!("maxval {maxval} outside 1..=65535")));
    }
    let (w, h) = (w as usize, h as usize);
    let n = w * h;
    let raster = &bytes[pos..];
    let data: Vec<u16> = if maxval < 256 {
        if raster.len() != n {
            return Err(Error::format(WHAT, format!("raster is {} bytes, expected {n}", raster.len())));
        }
        raster.iter().map(|&b| u16::from(b)).collect()
    } else {
        if raster.len() != 2 * n {
            return Err(Error::format(
                WHAT,
                format!("raster is {} bytes, expected {}", raster.len(), 2 * n),
            ));
        }
        raster
            .chunks_exact(2)
            .map(|b| u16::from_be_bytes([b[0], b[1]]))
            .collect()
    };
    Ok((w, h, maxval, data))
}

pub fn encode_meta(meta: &SensorMeta) -> String {
    format!(
        "black_level = {}\nwhite_level = {}\nbit_depth = {}\ncfa = {}\n",
        meta.black_level, meta.white_level, meta.bit_depth, meta.cfa
    )
}

pub fn decode_meta(text: &str) -> Result<SensorMeta> {
    const WHAT: &str = "sensor sidecar";
    let sections = kv::parse(text, WHAT)?;
    let s = &sections[0];
    let meta = SensorMeta {
        black_level: s.parse_num("black_level", WHAT)?,
        white_level: s.parse_num("white_level", WHAT)?,
        bit_depth: s.parse_num("bit_depth", WHAT)?,
        cfa: s.require("cfa", WHAT)?.parse::<CfaPattern>()?,
    };
    meta.validate()
        .map_err(|e| Error::format(WHAT, e.to_string()))?;
    Ok(meta)
}

/// Sidecar path for a mosaic: `dir/name.pgm` → `dir/name.meta`.
pub fn meta_path(pgm: &Path) -> PathBuf {
    pgm.with_extension("meta")
}

/// Reads a PGM mosaic plus its sidecar. The PGM maxval must equal the
/// sidecar white level.
pub fn read_mosaic(pgm: impl AsRef<Path>) -> Result<MosaicImage> {
    let pgm = pgm.as_ref();
    let sidecar = meta_path(pgm);
    let text = fs::read_to_string(&sidecar).map_err(|e| Error::io(&sidecar, e))?;
    let meta = decode_meta(&text)?;
    let bytes = fs::read(pgm).map_err(|e| Error::io(pgm, e))?;
    let (w, h, maxval, data) = decode_pgm(&bytes)?;
    if maxval != meta.white_level {
        return Err(Error::format(
            "PGM",
            format!("maxval {maxval} differs from white_level {}", meta.white_level),
        ));
    }
    MosaicImage::new(w, h, data, meta).map_err(|e| Error::format("mosaic", e.to_string()))
}

pub fn write_mosaic(pgm: impl AsRef<Path>, m: &MosaicImage) -> Result<()> {
    let pgm = pgm.as_ref();
    let bytes = encode_pgm(m.width, m.height, m.meta.white_level, &m.data)?;
    fs::write(pgm, bytes).map_err(|e| Error::io(pgm, e))?;
    let sidecar = meta_path(pgm);
    fs::write(&sidecar, encode_meta(&m.meta)).map_err(|e| Error::io(&sidecar, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn praw_header_layout() {
        let p = PackedRaw::from_planar(1, 1, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let bytes = encode_praw(&p);
        assert_eq!(&bytes[..4], b"PRAW");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[12..16], &4u32.to_le_bytes());
        assert_eq!(&bytes[16..20], &0u32.to_le_bytes());
        assert_eq!(&bytes[20..24], &1.0f32.to_le_bytes());
        assert_eq!(&bytes[32..36], &4.0f32.to_le_bytes());
    }

    #[test]
    fn praw_is_channel_last() {
        let p = PackedRaw::from_fn(2, 1, |c, _, x| (10 * x + c) as f32);
        let bytes = encode_praw(&p);
        let floats: Vec<f32> = bytes[20..]
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
            .collect();
        assert_eq!(floats, vec![0.0, 1.0, 2.0, 3.0, 10.0, 11.0, 12.0, 13.0]);
    }

    #[test]
    fn praw_rejects_bad_headers() {
        let p = PackedRaw::zeros(2, 2);
        let good = encode_praw(&p);
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(decode_praw(&bad).is_err());
        let mut bad = good.clone();
        bad[12] = 3;
        assert!(decode_praw(&bad).is_err());
        assert!(decode_praw(&good[..good.len() - 1]).is_err());
    }

    #[test]
    fn pgm_accepts_comments() {
        let mut bytes = b"P5\n# made by hand\n2 1\n# depth\n1000\n".to_vec();
        bytes.extend_from_slice(&[0x01, 0x00, 0x03, 0xe8]);
        let (w, h, maxval, data) = decode_pgm(&bytes).unwrap();
        assert_eq!((w, h, maxval), (2, 1, 1000));
        assert_eq!(data, vec![256, 1000]);
    }

    #[test]
    fn meta_missing_key_is_named() {
        let err = decode_meta("black_level = 64\nbit_depth = 12\ncfa = RGGB\n").unwrap_err();
        assert!(err.to_string().contains("white_level"), "{err}");
    }

    proptest! {
        #[test]
        fn praw_bytes_round_trip(w in 1usize..6, h in 1usize..6, seed in any::<u64>()) {
            let mut s = seed;
            let p = PackedRaw::from_fn(w, h, |_, _, _| {
                s = crate::rng::mix64(s);
                f32::from_bits((s >> 32) as u32 & 0x3f7f_ffff)
            });
            let bytes = encode_praw(&p);
            let back = decode_praw(&bytes).unwrap();
            prop_assert_eq!(encode_praw(&back), bytes);
        }

        #[test]
        fn pgm_bytes_round_trip(w in 1usize..8, h in 1usize..8, maxval in 256u32..65536, seed in any::<u64>()) {
            let mut s = seed;
            let data: Vec<u16> = (0..w * h).map(|_| { s = crate::rng::mix64(s); (s % u64::from(maxval + 1)) as u16 }).collect();
            let bytes = encode_pgm(w, h, maxval, &data).unwrap();
            let (w2, h2, m2, d2) = decode_pgm(&bytes).unwrap();
            prop_assert_eq!(encode_pgm(w2, h2, m2, &d2).unwrap(), bytes);
        }
    }
}
