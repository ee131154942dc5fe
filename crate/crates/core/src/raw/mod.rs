//! RAW data model: sensor mosaics, normalization and the packed 4-channel
//! working representation.

mod cfa;
pub mod io;
mod patches;

pub use cfa::{CfaPattern, B, G1, G2, R};
pub use patches::{extract_patches, patch_anchors, Patch, DEFAULT_PATCH_SIZE};

use crate::error::{Error, Result};

/// Sensor metadata needed to bring DN values into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensorMeta {
    pub black_level: u32,
    pub white_level: u32,
    pub bit_depth: u32,
    pub cfa: CfaPattern,
}

impl SensorMeta {
    pub fn max_code(&self) -> u32 {
        (1u32 << self.bit_depth) - 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(8..=16).contains(&self.bit_depth) {
            return Err(Error::invalid(format!(
                "bit_depth {} outside [8, 16]",
                self.bit_depth
            )));
        }
        if self.black_level >= self.white_level {
            return Err(Error::invalid(format!(
                "black_level {} must be below white_level {}",
                self.black_level, self.white_level
            )));
        }
        if self.white_level > self.max_code() {
            return Err(Error::invalid(format!(
                "white_level {} exceeds {}-bit range",
                self.white_level, self.bit_depth
            )));
        }
        Ok(())
    }
}

/// Single-channel sensor readout in digital numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct MosaicImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u16>,
    pub meta: SensorMeta,
}

impl MosaicImage {
    pub fn new(width: usize, height: usize, data: Vec<u16>, meta: SensorMeta) -> Result<Self> {
        let img = MosaicImage {
            width,
            height,
            data,
            meta,
        };
        img.validate()?;
        Ok(img)
    }

    pub fn validate(&self) -> Result<()> {
        self.meta.validate()?;
        check_even(self.width, self.height)?;
        if self.data.len() != self.width * self.height {
            return Err(Error::Shape {
                expected: format!("{} samples", self.width * self.height),
                got: format!("{} samples", self.data.len()),
            });
        }
        let max = self.meta.max_code();
        if let Some(v) = self.data.iter().find(|&&v| u32::from(v) > max) {
            return Err(Error::invalid(format!(
                "sample {v} exceeds {}-bit range",
                self.meta.bit_depth
            )));
        }
        Ok(())
    }
}

/// Real-valued single-channel plane, row-major. Holds normalized mosaics.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f32>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Shape {
                expected: format!("{} samples", width * height),
                got: format!("{} samples", data.len()),
            });
        }
        Ok(Plane {
            width,
            height,
            data,
        })
    }

    pub fn get(&self, y: usize, x: usize) -> f32 {
        self.data[y * self.width + x]
    }
}

/// Half-resolution 4-channel image in fixed R, G1, G2, B order.
///
/// Storage is planar: channel `c` occupies `data[c * w * h .. (c + 1) * w * h]`.
/// The on-disk `.praw` layout is channel-last; see [`io`].
#[derive(Debug, Clone, PartialEq)]
pub struct PackedRaw {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl PackedRaw {
    pub const CHANNELS: usize = 4;

    pub fn zeros(width: usize, height: usize) -> Self {
        PackedRaw {
            width,
            height,
            data: vec![0.0; width * height * Self::CHANNELS],
        }
    }

    pub fn filled(width: usize, height: usize, values: [f32; 4]) -> Self {
        let mut p = Self::zeros(width, height);
        for (c, v) in values.into_iter().enumerate() {
            p.plane_mut(c).fill(v);
        }
        p
    }

    /// Builds from planar data (channel-major).
    pub fn from_planar(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != width * height * Self::CHANNELS {
            return Err(Error::Shape {
                expected: format!("{width}x{height}x4 = {} values", width * height * 4),
                got: format!("{} values", data.len()),
            });
        }
        Ok(PackedRaw {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize, usize) -> f32) -> Self {
        let mut p = Self::zeros(width, height);
        for c in 0..Self::CHANNELS {
            let plane = p.plane_mut(c);
            for y in 0..height {
                for x in 0..width {
                    plane[y * width + x] = f(c, y, x);
                }
            }
        }
        p
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn plane_len(&self) -> usize {
        self.width * self.height
    }

    pub fn plane(&self, c: usize) -> &[f32] {
        let n = self.plane_len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f32] {
        let n = self.plane_len();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn planes(&self) -> impl Iterator<Item = &[f32]> {
        self.data.chunks_exact(self.plane_len().max(1)).take(Self::CHANNELS)
    }

    pub fn get(&self, c: usize, y: usize, x: usize) -> f32 {
        self.data[c * self.plane_len() + y * self.width + x]
    }

    /// All samples, planar order.
    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data
    }

    pub fn same_shape(&self, other: &PackedRaw) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn clamp_unit(&mut self) {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
    }

    /// Copies out the `size_w × size_h` window anchored at `(y0, x0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<PackedRaw> {
        if x0 + w > self.width || y0 + h > self.height {
            return Err(Error::invalid(format!(
                "crop {w}x{h}+{x0}+{y0} exceeds {}x{}",
                self.width, self.height
            )));
        }
        Ok(PackedRaw::from_fn(w, h, |c, y, x| self.get(c, y0 + y, x0 + x)))
    }
}

fn check_even(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 || !width.is_multiple_of(2) || !height.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "mosaic dimensions {width}x{height} must be nonzero and even"
        )));
    }
    Ok(())
}

/// Maps DN values to `[0, 1]` using the sensor black and white levels.
pub fn normalize_mosaic(m: &MosaicImage) -> Result<Plane> {
    m.validate()?;
    let black = f64::from(m.meta.black_level);
    let range = f64::from(m.meta.white_level) - black;
    let data = m
        .data
        .iter()
        .map(|&v| ((f64::from(v) - black) / range).clamp(0.0, 1.0) as f32)
        .collect();
    Plane::new(m.width, m.height, data)
}

/// Packs a normalized mosaic into canonical R, G1, G2, B planes.
pub fn pack_rggb(m: &Plane, cfa: CfaPattern) -> Result<PackedRaw> {
    check_even(m.width, m.height)?;
    let (w, h) = (m.width / 2, m.height / 2);
    let mut out = PackedRaw::zeros(w, h);
    for c in 0..PackedRaw::CHANNELS {
        let (dy, dx) = cfa.offset_of(c);
        let plane = out.plane_mut(c);
        for y in 0..h {
            let src = &m.data[(2 * y + dy) * m.width..];
            let dst = &mut plane[y * w..(y + 1) * w];
            for (x, d) in dst.iter_mut().enumerate() {
                *d = src[2 * x + dx];
            }
        }
    }
    Ok(out)
}

/// Inverse of [`pack_rggb`]: places each packed channel at its CFA site.
pub fn unpack_rggb(p: &PackedRaw, cfa: CfaPattern) -> Plane {
    let (w, h) = (p.width() * 2, p.height() * 2);
    let mut data = vec![0.0f32; w * h];
    for c in 0..PackedRaw::CHANNELS {
        let (dy, dx) = cfa.offset_of(c);
        let plane = p.plane(c);
        for y in 0..p.height() {
            let row = &mut data[(2 * y + dy) * w..(2 * y + dy + 1) * w];
            for x in 0..p.width() {
                row[2 * x + dx] = plane[y * p.width() + x];
            }
        }
    }
    Plane {
        width: w,
        height: h,
        data,
    }
}
