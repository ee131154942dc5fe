#![allow(dead_code)]

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rawforge::raw::{io, unpack_rggb, CfaPattern, MosaicImage, PackedRaw, SensorMeta};

pub const META: SensorMeta = SensorMeta {
    black_level: 512,
    white_level: 16383,
    bit_depth: 14,
    cfa: CfaPattern::Rggb,
};

/// Small 64-bit LCG used to build reproducible reference inputs.
pub fn lcg(seed: u64, n: usize) -> Vec<f64> {
    let mut s = seed;
    (0..n)
        .map(|_| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (s >> 40) as f64 / (1u64 << 24) as f64
        })
        .collect()
}

/// Oriented sinusoids with log-uniform frequencies up to near the sampling
/// limit and roughly 1/f amplitudes.
pub fn textured(seed: u64, w: usize, h: usize) -> PackedRaw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<[f64; 4]> = (0..12)
        .map(|_| {
            let f = (rng.random_range(0.05f64.ln()..2.8f64.ln())).exp();
            let a = rng.random_range(0.0..std::f64::consts::PI);
            [f * a.cos(), f * a.sin(), rng.random_range(0.0..6.3), 0.035 / f.sqrt()]
        })
        .collect();
    let gains: [f64; 4] = [0.8, 1.0, 1.0, 0.7];
    PackedRaw::from_fn(w, h, |c, y, x| {
        let mut v = 0.5;
        for wv in &waves {
            v += wv[3] * (wv[0] * x as f64 + wv[1] * y as f64 + wv[2]).sin();
        }
        (v * gains[c]).clamp(0.0, 1.0) as f32
    })
}

/// Quantizes a packed image to 14-bit DN and writes it as `name.pgm` plus
/// its sidecar.
pub fn write_packed_as_mosaic(dir: &Path, name: &str, p: &PackedRaw) {
    let plane = unpack_rggb(p, META.cfa);
    let range = f64::from(META.white_level - META.black_level);
    let data = plane
        .data
        .iter()
        .map(|&v| (f64::from(META.black_level) + f64::from(v) * range).round() as u16)
        .collect();
    let m = MosaicImage::new(plane.width, plane.height, data, META).unwrap();
    io::write_mosaic(dir.join(format!("{name}.pgm")), &m).unwrap();
}

pub fn write_test_mosaic(dir: &Path, name: &str, seed: u64, packed_w: usize, packed_h: usize) {
    write_packed_as_mosaic(dir, name, &textured(seed, packed_w, packed_h));
}

/// Sorted `(file name, bytes)` pairs of a directory.
pub fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

/// Random image in `[0, 1)`.
pub fn random_packed(rng: &mut ChaCha8Rng, w: usize, h: usize) -> PackedRaw {
    PackedRaw::from_fn(w, h, |_, _, _| rng.random::<f32>())
}
