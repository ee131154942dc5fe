//! Measured point-spread functions.
//!
//! File layout: `"PSF1" | u32 size (LE) | size² f32 weights (LE, row-major)`.

use std::fs;
use std::path::Path;

use super::{Kernel, SUM_TOLERANCE};
use crate::error::{Error, Result};

pub const PSF_MAGIC: &[u8; 4] = b"PSF1";
const WHAT: &str = "PSF1 file";

pub fn encode_psf(k: &Kernel) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + 4 * k.weights().len());
    out.extend_from_slice(PSF_MAGIC);
    out.extend_from_slice(&(k.size() as u32).to_le_bytes());
    for &w in k.weights() {
        out.extend_from_slice(&(w as f32).to_le_bytes());
    }
    out
}

/// Parses a PSF grid. Negative ringing is clamped to zero and the result
/// renormalized; grids that are already nonnegative with unit sum (within
/// [`SUM_TOLERANCE`]) are kept verbatim so files round-trip byte for byte.
pub fn decode_psf(bytes: &[u8]) -> Result<Kernel> {
    if bytes.len() < 8 || &bytes[..4] != PSF_MAGIC {
        return Err(Error::format(WHAT, "missing PSF1 magic"));
    }
    let size = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if size == 0 || size.is_multiple_of(2) {
        return Err(Error::format(WHAT, format!("size {size} must be odd")));
    }
    let body = &bytes[8..];
    if body.len() != size * size * 4 {
        return Err(Error::format(
            WHAT,
            format!("payload is {} bytes, expected {}", body.len(), size * size * 4),
        ));
    }
    let mut weights: Vec<f64> = body
        .chunks_exact(4)
        .map(|b| f64::from(f32::from_le_bytes(b.try_into().unwrap())))
        .collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::format(WHAT, "non-finite weight"));
    }
    let had_negative = weights.iter().any(|&w| w < 0.0);
    for w in &mut weights {
        *w = w.max(0.0);
    }
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return Err(Error::format(WHAT, "grid has no positive mass"));
    }
    if !had_negative && (sum - 1.0).abs() <= SUM_TOLERANCE {
        return Ok(Kernel { size, weights });
    }
    Kernel::from_weights(size, weights)
}

pub fn load_psf(path: impl AsRef<Path>) -> Result<Kernel> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_psf(&bytes)
}

pub fn write_psf(path: impl AsRef<Path>, k: &Kernel) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_psf(k)).map_err(|e| Error::io(path, e))
}
