//! Fidelity metrics: PSNR and single-scale SSIM, in the RAW and rendered
//! RGB domains.

use crate::error::{Error, Result};
use crate::isp::{render_rgb, IspParams};
use crate::raw::PackedRaw;

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

/// `10·log10(peak² / MSE)` over all samples; identical inputs give
/// `f64::INFINITY`.
pub fn psnr<T: Copy + Into<f64>>(a: &[T], b: &[T], peak: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape {
            expected: format!("{} samples", a.len()),
            got: format!("{} samples", b.len()),
        });
    }
    if a.is_empty() {
        return Err(Error::invalid("PSNR of empty images"));
    }
    if !(peak > 0.0) {
        return Err(Error::invalid(format!("PSNR peak must be positive, got {peak}")));
    }
    let sse: f64 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x.into() - y.into();
            d * d
        })
        .sum();
    let mse = sse / a.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}

fn gaussian_window() -> [f64; SSIM_WINDOW] {
    let r = (SSIM_WINDOW / 2) as f64;
    let mut w = [0.0; SSIM_WINDOW];
    for (i, v) in w.iter_mut().enumerate() {
        let d = i as f64 - r;
        *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let sum: f64 = w.iter().sum();
    w.map(|v| v / sum)
}

/// Separable "valid" filtering: output is `(w - 10) × (h - 10)`.
fn filter_valid(src: &[f64], w: usize, h: usize, win: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let (ow, oh) = (w + 1 - SSIM_WINDOW, h + 1 - SSIM_WINDOW);
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        let line = &src[y * w..(y + 1) * w];
        for x in 0..ow {
            rows[y * ow + x] = win.iter().zip(&line[x..]).map(|(k, v)| k * v).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for (k, &wt) in win.iter().enumerate() {
            let line = &rows[(y + k) * ow..(y + k + 1) * ow];
            for (o, v) in out[y * ow..(y + 1) * ow].iter_mut().zip(line) {
                *o += wt * v;
            }
        }
    }
    out
}

/// Single-scale SSIM of two planes with dynamic range 1: 11×11 Gaussian
/// window (σ = 1.5), K1 = 0.01, K2 = 0.03, averaged over window positions
/// that lie fully inside the image.
pub fn ssim<T: Copy + Into<f64>>(a: &[T], b: &[T], width: usize, height: usize) -> Result<f64> {
    if a.len() != width * height || b.len() != width * height {
        return Err(Error::Shape {
            expected: format!("{width}x{height}"),
            got: format!("{} and {} samples", a.len(), b.len()),
        });
    }
    if width.min(height) < SSIM_WINDOW {
        return Err(Error::invalid(format!(
            "SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {width}x{height}"
        )));
    }
    let c1 = (SSIM_K1 * 1.0f64).powi(2);
    let c2 = (SSIM_K2 * 1.0f64).powi(2);
    let win = gaussian_window();
    let x: Vec<f64> = a.iter().map(|&v| v.into()).collect();
    let y: Vec<f64> = b.iter().map(|&v| v.into()).collect();
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p * q).collect();
    let mx = filter_valid(&x, width, height, &win);
    let my = filter_valid(&y, width, height, &win);
    let mxx = filter_valid(&xx, width, height, &win);
    let myy = filter_valid(&yy, width, height, &win);
    let mxy = filter_valid(&xy, width, height, &win);
    let n = mx.len();
    let total: f64 = (0..n)
        .map(|i| {
            let (ux, uy) = (mx[i], my[i]);
            let vx = mxx[i] - ux * ux;
            let vy = myy[i] - uy * uy;
            let cov = mxy[i] - ux * uy;
            ((2.0 * ux * uy + c1) * (2.0 * cov + c2))
                / ((ux * ux + uy * uy + c1) * (vx + vy + c2))
        })
        .sum();
    Ok(total / n as f64)
}

/// Mean SSIM over the four packed channels.
pub fn ssim_packed(a: &PackedRaw, b: &PackedRaw) -> Result<f64> {
    check_same(a, b)?;
    let mut total = 0.0;
    for c in 0..PackedRaw::CHANNELS {
        total += ssim(a.plane(c), b.plane(c), a.width(), a.height())?;
    }
    Ok(total / PackedRaw::CHANNELS as f64)
}

fn check_same(a: &PackedRaw, b: &PackedRaw) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::Shape {
            expected: format!("{}x{}x4", a.width(), a.height()),
            got: format!("{}x{}x4", b.width(), b.height()),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairReport {
    pub psnr_raw: f64,
    pub ssim_raw: f64,
    pub psnr_rgb: f64,
    pub ssim_rgb: f64,
}

impl PairReport {
    pub const HEADER: &'static str = "psnr_raw\tssim_raw\tpsnr_rgb\tssim_rgb";

    pub fn values(&self) -> [f64; 4] {
        [self.psnr_raw, self.ssim_raw, self.psnr_rgb, self.ssim_rgb]
    }

    pub fn to_tsv(&self) -> String {
        self.values()
            .iter()
            .map(|v| format_metric(*v))
            .collect::<Vec<_>>()
            .join("\t")
    }
}

/// Fixed-precision metric text; infinite PSNR prints as `inf`.
pub fn format_metric(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.4}")
    }
}

/// RAW metrics on the packed data (peak 1) and RGB metrics on the 8-bit
/// renders of both images through the same ISP (peak 255).
pub fn evaluate_pair(clean: &PackedRaw, restored: &PackedRaw, isp: &IspParams) -> Result<PairReport> {
    check_same(clean, restored)?;
    let psnr_raw = psnr(clean.as_slice(), restored.as_slice(), 1.0)?;
    let ssim_raw = ssim_packed(clean, restored)?;
    let a = render_rgb(clean, isp)?;
    let b = render_rgb(restored, isp)?;
    let psnr_rgb = psnr(&a.data, &b.data, 255.0)?;
    let mut ssim_rgb = 0.0;
    for c in 0..3 {
        ssim_rgb += ssim(&a.channel_unit(c), &b.channel_unit(c), a.width, a.height)?;
    }
    Ok(PairReport {
        psnr_raw,
        ssim_raw,
        psnr_rgb,
        ssim_rgb: ssim_rgb / 3.0,
    })
}

/// Mean and population standard deviation of each report column.
/// Infinite PSNR values propagate as infinite means.
pub fn aggregate(reports: &[PairReport]) -> Option<([f64; 4], [f64; 4])> {
    if reports.is_empty() {
        return None;
    }
    let n = reports.len() as f64;
    let mut mean = [0.0; 4];
    for r in reports {
        for (m, v) in mean.iter_mut().zip(r.values()) {
            *m += v / n;
        }
    }
    let mut std = [0.0; 4];
    for (k, s) in std.iter_mut().enumerate() {
        if mean[k].is_finite() {
            *s = (reports.iter().map(|r| (r.values()[k] - mean[k]).powi(2)).sum::<f64>() / n).sqrt();
        } else {
            *s = f64::NAN;
        }
    }
    Some((mean, std))
}
