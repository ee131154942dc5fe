use super::PackedRaw;
use crate::error::{Error, Result};

pub const DEFAULT_PATCH_SIZE: usize = 248;

#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    pub x: usize,
    pub y: usize,
    pub image: PackedRaw,
}

/// Grid anchors along one axis. The last patch is pushed flush against the
/// far edge when the stride does not land there exactly.
pub fn patch_anchors(len: usize, size: usize, stride: usize) -> Vec<usize> {
    let mut anchors: Vec<usize> = (0..)
        .map(|i| i * stride)
        .take_while(|&a| a + size <= len)
        .collect();
    match anchors.last() {
        Some(&last) if last + size < len => anchors.push(len - size),
        None => anchors.push(0),
        _ => {}
    }
    anchors
}

/// Cuts `p` into `size × size` patches on a `stride` grid, row-major order.
pub fn extract_patches(p: &PackedRaw, size: usize, stride: usize) -> Result<Vec<Patch>> {
    if size == 0 || stride == 0 {
        return Err(Error::invalid("patch size and stride must be positive"));
    }
    if size > p.width().min(p.height()) {
        return Err(Error::invalid(format!(
            "patch size {size} exceeds image {}x{}",
            p.width(),
            p.height()
        )));
    }
    let xs = patch_anchors(p.width(), size, stride);
    let ys = patch_anchors(p.height(), size, stride);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &y in &ys {
        for &x in &xs {
            out.push(Patch {
                x,
                y,
                image: p.crop(x, y, size, size)?,
            });
        }
    }
    Ok(out)
}
