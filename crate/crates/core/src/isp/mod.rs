//! Fixed canonical ISP used to render packed RAW images for evaluation:
//! bilinear demosaic, white balance, color correction, tone mapping, gamma
//! and 8-bit quantization.

mod color;
mod demosaic;
mod ppm;

pub use color::{apply_ccm, gamma_encode, srgb_encode, tone_map, white_balance};
pub use demosaic::demosaic_bilinear;
pub use ppm::{decode_ppm, encode_ppm, write_ppm};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raw::{unpack_rggb, CfaPattern, PackedRaw};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GammaMode {
    #[default]
    Srgb,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ToneMapMode {
    /// `2v / (1 + v)`: Reinhard rescaled so that 1 stays 1.
    Reinhard,
    #[default]
    None,
}

/// Linear RGB image, channel-last, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f32>,
}

impl RgbImage {
    pub fn pixels(&self) -> impl Iterator<Item = &[f32]> {
        self.data.chunks_exact(3)
    }

    pub fn map_pixels(&self, mut f: impl FnMut([f64; 3]) -> [f64; 3]) -> RgbImage {
        let mut data = Vec::with_capacity(self.data.len());
        for px in self.pixels() {
            let out = f([f64::from(px[0]), f64::from(px[1]), f64::from(px[2])]);
            data.extend(out.iter().map(|&v| v.clamp(0.0, 1.0) as f32));
        }
        RgbImage {
            width: self.width,
            height: self.height,
            data,
        }
    }
}

/// 8-bit RGB image, channel-last, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rgb8Image {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl Rgb8Image {
    /// One channel as a plane in `[0, 1]`.
    pub fn channel_unit(&self, c: usize) -> Vec<f64> {
        self.data
            .chunks_exact(3)
            .map(|px| f64::from(px[c]) / 255.0)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IspParams {
    /// White-balance gains for R, G and B.
    pub wb_gains: [f64; 3],
    /// Row-major color correction matrix; each row sums to one.
    pub ccm: [[f64; 3]; 3],
    pub gamma: GammaMode,
    pub tonemap: ToneMapMode,
}

impl Default for IspParams {
    fn default() -> Self {
        IspParams {
            wb_gains: [1.0; 3],
            ccm: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            gamma: GammaMode::Srgb,
            tonemap: ToneMapMode::None,
        }
    }
}

impl IspParams {
    pub fn validate(&self) -> Result<()> {
        if self.wb_gains.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(Error::invalid(format!(
                "white-balance gains must be positive, got {:?}",
                self.wb_gains
            )));
        }
        for (i, row) in self.ccm.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if !row.iter().all(|v| v.is_finite()) || (sum - 1.0).abs() > 1e-6 {
                return Err(Error::invalid(format!(
                    "ccm row {i} sums to {sum}, expected 1"
                )));
            }
        }
        Ok(())
    }
}

/// Round half away from zero to 8 bits.
pub fn quantize8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Renders a packed image to 8-bit RGB:
/// unpack (RGGB) → demosaic → white balance → CCM → tone map → gamma →
/// quantize.
pub fn render_rgb(p: &PackedRaw, params: &IspParams) -> Result<Rgb8Image> {
    params.validate()?;
    let mosaic = unpack_rggb(p, CfaPattern::Rggb);
    let rgb = demosaic_bilinear(&mosaic, CfaPattern::Rggb)?;
    let [gr, gg, gb] = params.wb_gains;
    let m = params.ccm;
    let tonemap = params.tonemap;
    let gamma = params.gamma;
    let data = rgb
        .pixels()
        .flat_map(|px| {
            let wb = [
                (f64::from(px[0]) * gr).clamp(0.0, 1.0),
                (f64::from(px[1]) * gg).clamp(0.0, 1.0),
                (f64::from(px[2]) * gb).clamp(0.0, 1.0),
            ];
            let mut out = [0u8; 3];
            for (o, row) in out.iter_mut().zip(&m) {
                let v = (row[0] * wb[0] + row[1] * wb[1] + row[2] * wb[2]).clamp(0.0, 1.0);
                *o = quantize8(gamma_encode(tone_map(v, tonemap), gamma));
            }
            out
        })
        .collect();
    Ok(Rgb8Image {
        width: rgb.width,
        height: rgb.height,
        data,
    })
}
