use super::{GammaMode, RgbImage, ToneMapMode};

pub fn white_balance(rgb: &RgbImage, gains: [f64; 3]) -> RgbImage {
    rgb.map_pixels(|px| [px[0] * gains[0], px[1] * gains[1], px[2] * gains[2]])
}

pub fn apply_ccm(rgb: &RgbImage, ccm: &[[f64; 3]; 3]) -> RgbImage {
    rgb.map_pixels(|px| {
        let mut out = [0.0; 3];
        for (o, row) in out.iter_mut().zip(ccm) {
            *o = row[0] * px[0] + row[1] * px[1] + row[2] * px[2];
        }
        out
    })
}

/// Piecewise sRGB transfer curve.
pub fn srgb_encode(v: f64) -> f64 {
    if v <= 0.003_130_8 {
        12.92 * v
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

pub fn gamma_encode(v: f64, mode: GammaMode) -> f64 {
    match mode {
        GammaMode::Srgb => srgb_encode(v),
        GammaMode::None => v,
    }
}

pub fn tone_map(v: f64, mode: ToneMapMode) -> f64 {
    match mode {
        ToneMapMode::Reinhard => 2.0 * v / (1.0 + v),
        ToneMapMode::None => v,
    }
}
