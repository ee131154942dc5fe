use super::NoiseProfile;
use crate::error::{Error, Result};

/// Mean and unbiased variance of one flat frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelStats {
    pub mean: f64,
    pub variance: f64,
}

pub fn frame_stats(samples: &[f32]) -> LevelStats {
    let n = samples.len() as f64;
    let mean = samples.iter().map(|&v| f64::from(v)).sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|&v| (f64::from(v) - mean).powi(2)).sum();
    LevelStats {
        mean,
        variance: if samples.len() > 1 { ss / (n - 1.0) } else { 0.0 },
    }
}

/// Weighted least squares line `v ≈ intercept + slope·x`.
fn fit_line(points: &[LevelStats], weights: &[f64]) -> Result<(f64, f64)> {
    let sw: f64 = weights.iter().sum();
    let mx = points.iter().zip(weights).map(|(p, w)| w * p.mean).sum::<f64>() / sw;
    let mv = points.iter().zip(weights).map(|(p, w)| w * p.variance).sum::<f64>() / sw;
    let sxx: f64 = points.iter().zip(weights).map(|(p, w)| w * (p.mean - mx).powi(2)).sum();
    let sxv: f64 = points
        .iter()
        .zip(weights)
        .map(|(p, w)| w * (p.mean - mx) * (p.variance - mv))
        .sum();
    if !(sxx > 1e-300) {
        return Err(Error::invalid(
            "noise calibration needs at least two distinct signal levels",
        ));
    }
    let slope = sxv / sxx;
    Ok((mv - slope * mx, slope))
}

fn check_points(points: &[LevelStats]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::invalid("noise calibration needs at least two levels"));
    }
    if points.iter().any(|p| !p.mean.is_finite() || !p.variance.is_finite()) {
        return Err(Error::invalid("non-finite calibration sample"));
    }
    Ok(())
}

fn to_profile(intercept: f64, slope: f64) -> NoiseProfile {
    NoiseProfile {
        name: "estimated".into(),
        lambda_shot: slope.max(0.0),
        lambda_read: intercept.max(0.0),
    }
}

/// Ordinary least-squares fit of `variance ≈ λ_r + λ_s·mean`. Negative
/// estimates are clamped to zero.
pub fn estimate_profile(points: &[LevelStats]) -> Result<NoiseProfile> {
    check_points(points)?;
    let (intercept, slope) = fit_line(points, &vec![1.0; points.len()])?;
    Ok(to_profile(intercept, slope))
}

/// Iteratively reweighted fit. The sampling variance of a variance estimate
/// scales with the square of the true variance, so each level is weighted by
/// `1 / v̂²` where `v̂` is the current model prediction. Much tighter than
/// [`estimate_profile`] on the read term when shot noise dominates.
pub fn estimate_profile_weighted(points: &[LevelStats]) -> Result<NoiseProfile> {
    check_points(points)?;
    let (mut intercept, mut slope) = fit_line(points, &vec![1.0; points.len()])?;
    for _ in 0..8 {
        let predicted: Vec<f64> = points.iter().map(|p| intercept + slope * p.mean).collect();
        let floor = points.iter().map(|p| p.variance).fold(0.0, f64::max) * 1e-6;
        if !(floor > 0.0) || predicted.iter().any(|&v| !(v > floor)) {
            break;
        }
        let weights: Vec<f64> = predicted.iter().map(|v| 1.0 / (v * v)).collect();
        let (i, s) = fit_line(points, &weights)?;
        let converged = (i - intercept).abs() <= 1e-12 * intercept.abs().max(1e-300)
            && (s - slope).abs() <= 1e-12 * slope.abs().max(1e-300);
        intercept = i;
        slope = s;
        if converged {
            break;
        }
    }
    Ok(to_profile(intercept, slope))
}
