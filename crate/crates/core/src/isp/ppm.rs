//! Binary PPM (P6) with maxval 255.

use std::fs;
use std::path::Path;

use super::Rgb8Image;
use crate::error::{Error, Result};
use crate::raw::io::pnm_header;

pub fn encode_ppm(img: &Rgb8Image) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.data);
    out
}

pub fn decode_ppm(bytes: &[u8]) -> Result<Rgb8Image> {
    const WHAT: &str = "PPM";
    let ([w, h, maxval], pos) = pnm_header(bytes, b"P6", WHAT)?;
    if maxval != 255 {
        return Err(Error::format(WHAT, "only maxval 255 is supported"));
    }
    let (w, h) = (w as usize, h as usize);
    let data = bytes[pos..].to_vec();
    if data.len() != w * h * 3 {
        return Err(Error::format(WHAT, "raster size mismatch"));
    }
    Ok(Rgb8Image {
        width: w,
        height: h,
        data,
    })
}

pub fn write_ppm(path: impl AsRef<Path>, img: &Rgb8Image) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_ppm(img)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let img = Rgb8Image {
            width: 2,
            height: 1,
            data: vec![1, 2, 3, 250, 251, 252],
        };
        let bytes = encode_ppm(&img);
        assert!(bytes.starts_with(b"P6\n2 1\n255\n"));
        assert_eq!(decode_ppm(&bytes).unwrap(), img);
    }
}
