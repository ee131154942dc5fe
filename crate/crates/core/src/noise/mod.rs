//! Shot-read sensor noise: synthesis, profile registry and calibration.
//!
//! The model draws each sample as `y ~ N(x, λ_r + λ_s·x)` on normalized
//! signal values.

mod estimate;
pub(crate) mod registry;
mod synth;

pub use estimate::{estimate_profile, estimate_profile_weighted, frame_stats, LevelStats};
pub use registry::{draw_profile, ProfileRange, ProfileRegistry};
pub use synth::{sample_shot_read, shot_read_unclamped};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseProfile {
    pub name: String,
    /// Variance per unit signal.
    pub lambda_shot: f64,
    /// Signal-independent variance.
    pub lambda_read: f64,
}

impl NoiseProfile {
    pub fn new(name: impl Into<String>, lambda_shot: f64, lambda_read: f64) -> Result<Self> {
        let p = NoiseProfile {
            name: name.into(),
            lambda_shot,
            lambda_read,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn noiseless() -> Self {
        NoiseProfile {
            name: "noiseless".into(),
            lambda_shot: 0.0,
            lambda_read: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(self.lambda_shot) || !ok(self.lambda_read) {
            return Err(Error::invalid(format!(
                "noise profile `{}` needs finite nonnegative lambdas, got ({}, {})",
                self.name, self.lambda_shot, self.lambda_read
            )));
        }
        Ok(())
    }

    /// Noise variance at signal level `x`.
    pub fn variance(&self, x: f64) -> f64 {
        self.lambda_read + self.lambda_shot * x
    }
}
