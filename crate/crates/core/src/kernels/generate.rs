//! Parametric kernel generators.
//!
//! Offsets are measured from the kernel center: `dx` grows with the column,
//! `dy` with the row. Angles are counterclockwise as seen on screen, so a
//! positive angle moves toward smaller row indices.

use super::Kernel;
use crate::error::{Error, Result};

pub const MAX_KERNEL_SIZE: usize = 21;

fn check_size(size: usize) -> Result<()> {
    if size == 0 || size.is_multiple_of(2) {
        return Err(Error::invalid(format!("kernel size {size} must be odd")));
    }
    Ok(())
}

/// `2·ceil(3σ) + 1`, capped at [`MAX_KERNEL_SIZE`].
pub fn default_gaussian_size(sigma: f64) -> usize {
    (2 * (3.0 * sigma).ceil().max(1.0) as usize + 1).min(MAX_KERNEL_SIZE)
}

pub fn default_disk_size(radius: f64) -> usize {
    (2 * radius.ceil().max(1.0) as usize + 1).min(MAX_KERNEL_SIZE)
}

/// Smallest odd size containing a centered segment of `length`.
pub fn default_motion_size(length: f64) -> usize {
    (2 * ((length - 1.0) / 2.0).ceil().max(0.0) as usize + 1).min(MAX_KERNEL_SIZE)
}

/// Rotated bivariate Gaussian sampled at integer offsets and normalized.
///
/// `sigma_x` is the spread along the axis at angle `theta`, `sigma_y` across it.
pub fn gaussian_kernel(sigma_x: f64, sigma_y: f64, theta: f64, size: usize) -> Result<Kernel> {
    if !(sigma_x > 0.0 && sigma_y > 0.0) {
        return Err(Error::invalid(format!(
            "gaussian sigmas must be positive, got ({sigma_x}, {sigma_y})"
        )));
    }
    check_size(size)?;
    let r = (size / 2) as f64;
    let (sin, cos) = theta.sin_cos();
    let mut w = Vec::with_capacity(size * size);
    for row in 0..size {
        let dy = r - row as f64;
        for col in 0..size {
            let dx = col as f64 - r;
            let u = dx * cos + dy * sin;
            let v = -dx * sin + dy * cos;
            w.push((-0.5 * (u * u / (sigma_x * sigma_x) + v * v / (sigma_y * sigma_y))).exp());
        }
    }
    Kernel::from_weights(size, w)
}

/// Area of the disk of radius `r` inside `[0, x] × [0, y]`, extended to
/// negative bounds with the sign of `x·y`.
fn quadrant_area(r: f64, x: f64, y: f64) -> f64 {
    let sign = x.signum() * y.signum();
    let (x, y) = (x.abs().min(r), y.abs().min(r));
    if x * x + y * y <= r * r {
        return sign * x * y;
    }
    let antiderivative = |t: f64| 0.5 * (t * (r * r - t * t).max(0.0).sqrt() + r * r * (t / r).asin());
    let t_star = (r * r - y * y).max(0.0).sqrt();
    sign * (y * t_star + antiderivative(x) - antiderivative(t_star))
}

/// Uniform defocus disk. Each pixel is weighted by the exact area of the
/// disk that falls inside its unit square, so the rim is antialiased.
pub fn disk_kernel(radius: f64, size: usize) -> Result<Kernel> {
    if !(radius > 0.0) {
        return Err(Error::invalid(format!("disk radius must be positive, got {radius}")));
    }
    check_size(size)?;
    let c = (size / 2) as f64;
    let mut w = Vec::with_capacity(size * size);
    for row in 0..size {
        let (y0, y1) = (row as f64 - c - 0.5, row as f64 - c + 0.5);
        for col in 0..size {
            let (x0, x1) = (col as f64 - c - 0.5, col as f64 - c + 0.5);
            let area = quadrant_area(radius, x1, y1) - quadrant_area(radius, x0, y1)
                - quadrant_area(radius, x1, y0)
                + quadrant_area(radius, x0, y0);
            w.push(area.max(0.0));
        }
    }
    Kernel::from_weights(size, w)
}

/// Clips the parametric segment `p + t·d`, `t ∈ [t0, t1]`, to `[lo, hi]` on
/// one axis.
fn clip_axis(p: f64, d: f64, lo: f64, hi: f64, t0: &mut f64, t1: &mut f64) {
    if d.abs() < 1e-12 {
        if p < lo || p > hi {
            *t1 = *t0;
        }
        return;
    }
    let (a, b) = ((lo - p) / d, (hi - p) / d);
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    *t0 = t0.max(a);
    *t1 = t1.min(b);
}

/// Straight-line motion trajectory of `length` pixels through the center.
///
/// Each pixel receives the length of the segment passing through its unit
/// square, which antialiases oblique lines.
pub fn motion_kernel(length: f64, angle: f64, size: usize) -> Result<Kernel> {
    if !(length >= 1.0) {
        return Err(Error::invalid(format!("motion length must be >= 1, got {length}")));
    }
    check_size(size)?;
    let c = (size / 2) as f64;
    let (sin, cos) = angle.sin_cos();
    let (dx, dy) = (cos, -sin);
    let half = length / 2.0;
    let mut w = Vec::with_capacity(size * size);
    for row in 0..size {
        let oy = row as f64 - c;
        for col in 0..size {
            let ox = col as f64 - c;
            let (mut t0, mut t1) = (-half, half);
            clip_axis(0.0, dx, ox - 0.5, ox + 0.5, &mut t0, &mut t1);
            clip_axis(0.0, dy, oy - 0.5, oy + 0.5, &mut t0, &mut t1);
            w.push((t1 - t0).max(0.0));
        }
    }
    Kernel::from_weights(size, w)
}
