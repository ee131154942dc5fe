use super::RgbImage;
use crate::error::{Error, Result};
use crate::kernels::reflect;
use crate::raw::{CfaPattern, Plane};

/// Bilinear demosaic. Each missing color at a site is the mean of the
/// same-color samples in its 3×3 neighborhood, with mirrored borders (which
/// keep the CFA phase intact).
pub fn demosaic_bilinear(m: &Plane, cfa: CfaPattern) -> Result<RgbImage> {
    let (w, h) = (m.width, m.height);
    if w < 2 || h < 2 {
        return Err(Error::invalid(format!("mosaic {w}x{h} too small to demosaic")));
    }
    let mut data = vec![0.0f32; w * h * 3];
    for y in 0..h {
        for x in 0..w {
            let own = cfa.color_at(y, x);
            let mut sum = [0.0f64; 3];
            let mut count = [0u32; 3];
            for dy in -1isize..=1 {
                let sy = reflect(y as isize + dy, h);
                for dx in -1isize..=1 {
                    let sx = reflect(x as isize + dx, w);
                    let c = cfa.color_at(sy, sx);
                    sum[c] += f64::from(m.data[sy * w + sx]);
                    count[c] += 1;
                }
            }
            let px = &mut data[(y * w + x) * 3..(y * w + x) * 3 + 3];
            for c in 0..3 {
                px[c] = if c == own {
                    m.data[y * w + x]
                } else {
                    (sum[c] / f64::from(count[c])) as f32
                };
            }
        }
    }
    Ok(RgbImage {
        width: w,
        height: h,
        data,
    })
}
