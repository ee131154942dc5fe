#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rawforge::raw::PackedRaw;

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

pub fn random_packed(rng: &mut ChaCha8Rng, w: usize, h: usize) -> PackedRaw {
    PackedRaw::from_fn(w, h, |_, _, _| rng.random::<f32>())
}

/// Natural-looking texture: oriented sinusoids with frequencies spread
/// log-uniformly up to near the sampling limit and roughly 1/f amplitudes,
/// with mildly different gains per color channel.
pub fn textured(seed: u64, w: usize, h: usize) -> PackedRaw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<[f64; 4]> = (0..12)
        .map(|_| {
            let f = (rng.random_range(0.05f64.ln()..2.8f64.ln())).exp();
            let a = rng.random_range(0.0..std::f64::consts::PI);
            let amp = 0.035 / f.sqrt();
            [f * a.cos(), f * a.sin(), rng.random_range(0.0..6.3), amp]
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

/// Mirror index without edge repetition, bouncing as many times as needed.
pub fn mirror(mut i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let n = n as isize;
    while i < 0 || i >= n {
        if i < 0 {
            i = -i;
        } else {
            i = 2 * (n - 1) - i;
        }
    }
    i as usize
}

/// Direct nested-loop convolution with mirror padding, clamped to [0, 1].
pub fn naive_convolve(p: &PackedRaw, k: &[f64], ks: usize) -> Vec<f32> {
    let (w, h) = (p.width(), p.height());
    let r = (ks / 2) as isize;
    let mut out = Vec::with_capacity(4 * w * h);
    for c in 0..4 {
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0f64;
                for u in -r..=r {
                    for v in -r..=r {
                        let kv = k[((u + r) as usize) * ks + (v + r) as usize];
                        let sy = mirror(y as isize - u, h);
                        let sx = mirror(x as isize - v, w);
                        acc += kv * f64::from(p.get(c, sy, sx));
                    }
                }
                out.push(acc.clamp(0.0, 1.0) as f32);
            }
        }
    }
    out
}

pub fn max_abs_diff(a: &[f32], b: &[f32]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (f64::from(x) - f64::from(y)).abs())
        .fold(0.0, f64::max)
}

/// Five 16×16 SSIM reference pairs (row-major, y = row, x = column) with
/// values frozen from an independent reference implementation configured
/// for Gaussian weighting (σ = 1.5), population covariance and data range 1.
pub fn ssim_reference_cases() -> Vec<(&'static str, Vec<f64>, Vec<f64>, f64)> {
    let grid = |f: &dyn Fn(f64, f64) -> f64| -> Vec<f64> {
        (0..16)
            .flat_map(|y| (0..16).map(move |x| (y, x)))
            .map(|(y, x)| f(x as f64, y as f64))
            .collect()
    };
    let checker = grid(&|x, y| ((x as u32 / 2 + y as u32 / 2) % 2) as f64);
    let inverse: Vec<f64> = checker.iter().map(|v| 1.0 - v).collect();
    let wave = grid(&|x, y| 0.5 + 0.4 * (0.7 * x + 0.3 * y).sin());
    let wave_b = grid(&|x, y| {
        0.5 + 0.4 * (0.7 * x + 0.3 * y).sin() + 0.05 * (1.3 * x - 0.4 * y).cos()
    });
    let noise = lcg(1, 256);
    let noise_affine: Vec<f64> = noise.iter().map(|v| 0.7 * v + 0.1).collect();
    vec![
        ("inverted checkerboard", checker, inverse, -0.9963760359070964),
        ("perturbed sinusoid", wave, wave_b, 0.9895584752520187),
        ("orthogonal ramps", grid(&|x, _| x / 15.0), grid(&|_, y| y / 15.0), 0.041009484939468085),
        ("affine noise", noise, noise_affine, 0.933837720339313),
        ("independent noise", lcg(7, 256), lcg(99, 256), -0.07094470377727281),
    ]
}

/// Writes a 14-bit RGGB mosaic (plus `.meta` sidecar) whose packed form is
/// `textured(seed, packed_w, packed_h)` quantized to DN.
pub fn write_test_mosaic(dir: &std::path::Path, name: &str, seed: u64, packed_w: usize, packed_h: usize) {
    use rawforge::raw::{io, unpack_rggb, CfaPattern, MosaicImage, SensorMeta};
    let meta = SensorMeta {
        black_level: 512,
        white_level: 16383,
        bit_depth: 14,
        cfa: CfaPattern::Rggb,
    };
    let plane = unpack_rggb(&textured(seed, packed_w, packed_h), meta.cfa);
    let range = f64::from(meta.white_level - meta.black_level);
    let data = plane
        .data
        .iter()
        .map(|&v| (f64::from(meta.black_level) + f64::from(v) * range).round() as u16)
        .collect();
    let m = MosaicImage::new(plane.width, plane.height, data, meta).unwrap();
    io::write_mosaic(dir.join(format!("{name}.pgm")), &m).unwrap();
}
