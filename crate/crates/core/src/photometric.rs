//! Exposure scaling and per-channel resampling of packed images.
//!
//! Resampling uses half-pixel centers: output sample `i` at scale `s` sits at
//! input coordinate `(i + 0.5)·s − 0.5` when shrinking and `(i + 0.5)/s − 0.5`
//! when enlarging. Edges replicate the border sample. Channels never mix, so
//! the Bayer structure of a packed image survives any of these operations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raw::PackedRaw;

pub const MAX_EXPOSURE_FACTOR: f64 = 4.0;

/// Multiplies every sample by `factor` and clips to `[0, 1]`.
pub fn exposure_scale(p: &PackedRaw, factor: f64) -> Result<PackedRaw> {
    if !(factor > 0.0 && factor <= MAX_EXPOSURE_FACTOR) {
        return Err(Error::invalid(format!(
            "exposure factor {factor} outside (0, {MAX_EXPOSURE_FACTOR}]"
        )));
    }
    let data = p
        .as_slice()
        .iter()
        .map(|&v| (f64::from(v) * factor).clamp(0.0, 1.0) as f32)
        .collect();
    PackedRaw::from_planar(p.width(), p.height(), data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResampleFilter {
    /// `s × s` block mean, the sensor-binning model.
    Box,
    /// Catmull-Rom cubic, support widened by `s` to antialias.
    #[default]
    Bicubic,
}

impl fmt::Display for ResampleFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResampleFilter::Box => "box",
            ResampleFilter::Bicubic => "bicubic",
        })
    }
}

impl FromStr for ResampleFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(ResampleFilter::Box),
            "bicubic" => Ok(ResampleFilter::Bicubic),
            other => Err(Error::invalid(format!("unknown filter `{other}`"))),
        }
    }
}

/// Catmull-Rom cubic convolution kernel (Keys, a = −0.5).
pub(crate) fn catmull_rom(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        (1.5 * t - 2.5) * t * t + 1.0
    } else if t < 2.0 {
        ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0
    } else {
        0.0
    }
}

/// Weights for one output sample. The output is computed as
/// `x[anchor] + Σ w·(x[j] − x[anchor])`, which equals `Σ w·x[j]` whenever the
/// weights sum to one and returns a constant input exactly.
struct Taps {
    anchor: usize,
    taps: Vec<(usize, f64)>,
}

fn clamp_index(i: i64, n: usize) -> usize {
    i.clamp(0, n as i64 - 1) as usize
}

fn shrink_taps(n_in: usize, s: usize, filter: ResampleFilter) -> Vec<Taps> {
    let n_out = n_in / s;
    (0..n_out)
        .map(|i| match filter {
            ResampleFilter::Box => {
                let w = 1.0 / s as f64;
                Taps {
                    anchor: i * s,
                    taps: (i * s..(i + 1) * s).map(|j| (j, w)).collect(),
                }
            }
            ResampleFilter::Bicubic => {
                let sf = s as f64;
                let center = (i as f64 + 0.5) * sf - 0.5;
                let support = 2.0 * sf;
                let lo = (center - support).floor() as i64;
                let hi = (center + support).ceil() as i64;
                let mut taps: Vec<(usize, f64)> = (lo..=hi)
                    .filter_map(|j| {
                        let w = catmull_rom((j as f64 - center) / sf);
                        (w != 0.0).then(|| (clamp_index(j, n_in), w))
                    })
                    .collect();
                let sum: f64 = taps.iter().map(|t| t.1).sum();
                for t in &mut taps {
                    t.1 /= sum;
                }
                Taps {
                    anchor: clamp_index(center.round() as i64, n_in),
                    taps,
                }
            }
        })
        .collect()
}

fn enlarge_taps(n_in: usize, s: usize) -> Vec<Taps> {
    (0..n_in * s)
        .map(|i| {
            let u = (i as f64 + 0.5) / s as f64 - 0.5;
            let base = u.floor();
            let t = u - base;
            let base = base as i64;
            let weights = [
                catmull_rom(t + 1.0),
                catmull_rom(t),
                catmull_rom(1.0 - t),
                catmull_rom(2.0 - t),
            ];
            Taps {
                anchor: clamp_index(base, n_in),
                taps: (0..4)
                    .filter(|&k| weights[k] != 0.0)
                    .map(|k| (clamp_index(base - 1 + k as i64, n_in), weights[k]))
                    .collect(),
            }
        })
        .collect()
}

/// Applies separable tap tables to every channel: rows first, then columns.
fn separable(p: &PackedRaw, xt: &[Taps], yt: &[Taps]) -> PackedRaw {
    let (w, h) = (p.width(), p.height());
    let (ow, oh) = (xt.len(), yt.len());
    let mut out = PackedRaw::zeros(ow, oh);
    let mut tmp = vec![0.0f64; ow * h];
    for c in 0..PackedRaw::CHANNELS {
        let src = p.plane(c);
        for y in 0..h {
            let row = &src[y * w..(y + 1) * w];
            let dst = &mut tmp[y * ow..(y + 1) * ow];
            for (d, t) in dst.iter_mut().zip(xt) {
                let a = f64::from(row[t.anchor]);
                *d = a + t
                    .taps
                    .iter()
                    .map(|&(j, wt)| wt * (f64::from(row[j]) - a))
                    .sum::<f64>();
            }
        }
        let dst = out.plane_mut(c);
        let mut acc = vec![0.0f64; ow];
        for (oy, t) in yt.iter().enumerate() {
            let anchor = &tmp[t.anchor * ow..(t.anchor + 1) * ow];
            acc.fill(0.0);
            for &(j, wt) in &t.taps {
                let row = &tmp[j * ow..(j + 1) * ow];
                for ((a, &v), &r) in acc.iter_mut().zip(row).zip(anchor) {
                    *a += wt * (v - r);
                }
            }
            for ((d, &a), &r) in dst[oy * ow..(oy + 1) * ow].iter_mut().zip(&acc).zip(anchor) {
                *d = (r + a).clamp(0.0, 1.0) as f32;
            }
        }
    }
    out
}

/// Shrinks each channel by integer factor `s`. Dimensions must be divisible
/// by `s`.
pub fn downsample(p: &PackedRaw, s: usize, filter: ResampleFilter) -> Result<PackedRaw> {
    if s == 0 {
        return Err(Error::invalid("scale must be at least 1"));
    }
    if !p.width().is_multiple_of(s) || !p.height().is_multiple_of(s) {
        return Err(Error::invalid(format!(
            "{}x{} is not divisible by scale {s}",
            p.width(),
            p.height()
        )));
    }
    if s == 1 {
        return Ok(p.clone());
    }
    let xt = shrink_taps(p.width(), s, filter);
    let yt = shrink_taps(p.height(), s, filter);
    Ok(separable(p, &xt, &yt))
}

/// Enlarges each channel by integer factor `s` with Catmull-Rom
/// interpolation, clamped to `[0, 1]`.
pub fn upsample_bicubic(p: &PackedRaw, s: usize) -> Result<PackedRaw> {
    if s == 0 {
        return Err(Error::invalid("scale must be at least 1"));
    }
    if s == 1 || p.width() == 0 || p.height() == 0 {
        return Ok(p.clone());
    }
    let xt = enlarge_taps(p.width(), s);
    let yt = enlarge_taps(p.height(), s);
    Ok(separable(p, &xt, &yt))
}
