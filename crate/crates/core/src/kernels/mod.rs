//! Blur kernels and their application to packed images.

mod convolve;
mod generate;
mod psf;

pub use convolve::convolve;
pub(crate) use convolve::reflect;
pub use generate::{
    default_disk_size, default_gaussian_size, default_motion_size, disk_kernel, gaussian_kernel,
    motion_kernel, MAX_KERNEL_SIZE,
};
pub use psf::{decode_psf, encode_psf, load_psf, write_psf, PSF_MAGIC};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of a kernel's weight sum from one.
pub const SUM_TOLERANCE: f64 = 1e-6;

/// Square, odd-sized, nonnegative kernel whose weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    weights: Vec<f64>,
}

impl Kernel {
    /// Normalizes `weights` to unit sum and validates the result.
    pub fn from_weights(size: usize, mut weights: Vec<f64>) -> Result<Self> {
        if size.is_multiple_of(2) {
            return Err(Error::invalid(format!("kernel size {size} must be odd")));
        }
        if weights.len() != size * size {
            return Err(Error::Shape {
                expected: format!("{} weights", size * size),
                got: format!("{} weights", weights.len()),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("kernel weights must be finite and nonnegative"));
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::invalid("kernel has no mass"));
        }
        for w in &mut weights {
            *w /= sum;
        }
        Ok(Kernel { size, weights })
    }

    pub fn delta(size: usize) -> Result<Self> {
        let mut w = vec![0.0; size * size];
        if let Some(center) = w.get_mut(size * size / 2) {
            *center = 1.0;
        }
        Self::from_weights(size, w)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    /// Row-major weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.size + col]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn transpose(&self) -> Kernel {
        let n = self.size;
        let weights = (0..n * n).map(|i| self.at(i % n, i / n)).collect();
        Kernel { size: n, weights }
    }

    /// Rotation by 90° counterclockwise.
    pub fn rotate90(&self) -> Kernel {
        let n = self.size;
        let weights = (0..n * n)
            .map(|i| {
                let (r, c) = (i / n, i % n);
                self.at(c, n - 1 - r)
            })
            .collect();
        Kernel { size: n, weights }
    }

    /// Full 2D convolution of two kernels, i.e. the single kernel equivalent
    /// to applying `self` then `other` away from image borders.
    pub fn compose(&self, other: &Kernel) -> Kernel {
        let n = self.size + other.size - 1;
        let mut w = vec![0.0; n * n];
        for r1 in 0..self.size {
            for c1 in 0..self.size {
                let a = self.at(r1, c1);
                if a == 0.0 {
                    continue;
                }
                for r2 in 0..other.size {
                    for c2 in 0..other.size {
                        w[(r1 + r2) * n + c1 + c2] += a * other.at(r2, c2);
                    }
                }
            }
        }
        Kernel::from_weights(n, w).expect("composition of valid kernels is valid")
    }

    /// Checks the nonnegativity, unit-sum and odd-size invariants.
    pub fn check_invariants(&self) -> Result<()> {
        if self.size.is_multiple_of(2) {
            return Err(Error::invalid("even kernel size"));
        }
        if self.weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::invalid("negative or non-finite weight"));
        }
        let sum = self.sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::invalid(format!("weights sum to {sum}")));
        }
        Ok(())
    }
}

/// Fully specified kernel: kind plus concrete parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    IsoGaussian {
        sigma: f64,
        size: usize,
    },
    AnisoGaussian {
        sigma_x: f64,
        sigma_y: f64,
        theta: f64,
        size: usize,
    },
    Disk {
        radius: f64,
        size: usize,
    },
    Motion {
        length: f64,
        angle: f64,
        size: usize,
    },
    MeasuredPsf {
        path: PathBuf,
    },
}

impl KernelSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            KernelSpec::IsoGaussian { .. } => "iso_gaussian",
            KernelSpec::AnisoGaussian { .. } => "aniso_gaussian",
            KernelSpec::Disk { .. } => "disk",
            KernelSpec::Motion { .. } => "motion",
            KernelSpec::MeasuredPsf { .. } => "measured_psf",
        }
    }

    pub fn build(&self) -> Result<Kernel> {
        match *self {
            KernelSpec::IsoGaussian { sigma, size } => gaussian_kernel(sigma, sigma, 0.0, size),
            KernelSpec::AnisoGaussian {
                sigma_x,
                sigma_y,
                theta,
                size,
            } => gaussian_kernel(sigma_x, sigma_y, theta, size),
            KernelSpec::Disk { radius, size } => disk_kernel(radius, size),
            KernelSpec::Motion {
                length,
                angle,
                size,
            } => motion_kernel(length, angle, size),
            KernelSpec::MeasuredPsf { ref path } => load_psf(path),
        }
    }
}
