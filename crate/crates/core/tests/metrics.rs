mod common;

use common::{lcg, ssim_reference_cases, textured};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rawforge::isp::IspParams;
use rawforge::metrics::{aggregate, evaluate_pair, psnr, ssim, ssim_packed};
use rawforge::raw::PackedRaw;

#[test]
fn psnr_closed_forms() {
    // Peak error everywhere: MSE = peak², so 0 dB.
    assert_eq!(psnr(&[0.0f64; 8], &[1.0f64; 8], 1.0).unwrap(), 0.0);
    // MSE = 0.01 with unit peak: exactly 20 dB.
    let a = [0.5f64; 100];
    let b = [0.6f64; 100];
    let v = psnr(&a, &b, 1.0).unwrap();
    assert!((v - 20.0).abs() < 1e-9, "{v}");
    // Integer inputs at peak 255.
    assert_eq!(psnr(&[0u8, 255], &[255u8, 0], 255.0).unwrap(), 0.0);
    assert_eq!(psnr(&[3u8; 9], &[3u8; 9], 255.0).unwrap(), f64::INFINITY);
    assert_eq!(psnr(&[0.25f32; 4], &[0.25f32; 4], 1.0).unwrap(), f64::INFINITY);
}

#[test]
fn psnr_rejects_mismatched_lengths() {
    assert!(psnr(&[0.0f64; 3], &[0.0f64; 4], 1.0).is_err());
}

#[test]
fn ssim_matches_reference_values() {
    for (name, a, b, want) in ssim_reference_cases() {
        let got = ssim(&a, &b, 16, 16).unwrap();
        assert!((got - want).abs() < 1e-4, "{name}: {got} vs {want}");
    }
}

/// Brute-force SSIM: evaluates every valid 11×11 window independently with
/// an explicitly built 2D Gaussian.
fn windowed_ssim(a: &[f64], b: &[f64], w: usize, h: usize) -> f64 {
    let mut g = [[0.0f64; 11]; 11];
    let mut s = 0.0;
    for (i, row) in g.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (dy, dx) = (i as f64 - 5.0, j as f64 - 5.0);
            *v = (-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5)).exp();
            s += *v;
        }
    }
    let (c1, c2) = (0.01f64.powi(2), 0.03f64.powi(2));
    let mut total = 0.0;
    let mut count = 0;
    for y0 in 0..=h - 11 {
        for x0 in 0..=w - 11 {
            let (mut mx, mut my) = (0.0, 0.0);
            for i in 0..11 {
                for j in 0..11 {
                    let k = g[i][j] / s;
                    mx += k * a[(y0 + i) * w + x0 + j];
                    my += k * b[(y0 + i) * w + x0 + j];
                }
            }
            let (mut vx, mut vy, mut cov) = (0.0, 0.0, 0.0);
            for i in 0..11 {
                for j in 0..11 {
                    let k = g[i][j] / s;
                    let dx = a[(y0 + i) * w + x0 + j] - mx;
                    let dy = b[(y0 + i) * w + x0 + j] - my;
                    vx += k * dx * dx;
                    vy += k * dy * dy;
                    cov += k * dx * dy;
                }
            }
            total += ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            count += 1;
        }
    }
    total / count as f64
}

#[test]
fn ssim_matches_brute_force_windows() {
    for (name, a, b, _) in ssim_reference_cases() {
        let got = ssim(&a, &b, 16, 16).unwrap();
        let want = windowed_ssim(&a, &b, 16, 16);
        assert!((got - want).abs() < 1e-9, "{name}: {got} vs {want}");
    }
    let (w, h) = (23, 17);
    let a = lcg(3, w * h);
    let b: Vec<f64> = a.iter().zip(lcg(4, w * h)).map(|(x, n)| 0.8 * x + 0.2 * n).collect();
    let got = ssim(&a, &b, w, h).unwrap();
    assert!((got - windowed_ssim(&a, &b, w, h)).abs() < 1e-9);
}

#[test]
fn ssim_of_identical_images_is_one() {
    let a = lcg(12, 400);
    assert!((ssim(&a, &a, 20, 20).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn ssim_rejects_images_smaller_than_window() {
    assert!(ssim(&[0.0f64; 100], &[0.0f64; 100], 10, 10).is_err());
}

fn add_noise(p: &PackedRaw, sigma: f64, seed: u64) -> PackedRaw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = Normal::new(0.0, sigma).unwrap();
    let mut out = p.clone();
    for v in out.as_mut_slice() {
        *v = (f64::from(*v) + n.sample(&mut rng)).clamp(0.0, 1.0) as f32;
    }
    out
}

#[test]
fn psnr_and_ssim_fall_as_noise_grows() {
    let clean = textured(21, 48, 48);
    let mut last = (f64::INFINITY, 1.0);
    for (i, &sigma) in [0.005, 0.01, 0.02, 0.05, 0.1].iter().enumerate() {
        let noisy = add_noise(&clean, sigma, i as u64);
        let p = psnr(clean.as_slice(), noisy.as_slice(), 1.0).unwrap();
        let s = ssim_packed(&clean, &noisy).unwrap();
        assert!(p < last.0 && s < last.1, "sigma {sigma}: psnr {p}, ssim {s}");
        last = (p, s);
    }
}

proptest! {
    #[test]
    fn metrics_are_symmetric(seed_a in any::<u64>(), seed_b in any::<u64>()) {
        let a = lcg(seed_a, 14 * 13);
        let b = lcg(seed_b, 14 * 13);
        prop_assert_eq!(psnr(&a, &b, 1.0).unwrap(), psnr(&b, &a, 1.0).unwrap());
        let (s1, s2) = (ssim(&a, &b, 14, 13).unwrap(), ssim(&b, &a, 14, 13).unwrap());
        prop_assert!((s1 - s2).abs() < 1e-12);
    }
}

#[test]
fn pair_report_covers_raw_and_rgb() {
    let clean = textured(2, 24, 24);
    let same = evaluate_pair(&clean, &clean, &IspParams::default()).unwrap();
    assert_eq!(same.values()[0], f64::INFINITY);
    assert_eq!(same.values()[2], f64::INFINITY);
    assert!((same.values()[1] - 1.0).abs() < 1e-12);
    let noisy = add_noise(&clean, 0.03, 9);
    let r = evaluate_pair(&clean, &noisy, &IspParams::default()).unwrap();
    assert!(r.values().iter().all(|v| v.is_finite()));
    let (mean, std) = aggregate(&[same, r]).unwrap();
    assert!((mean[1] - (1.0 + r.values()[1]) / 2.0).abs() < 1e-12);
    assert!(std[1] > 0.0);
}
