use serde::{Deserialize, Serialize};

use super::Level;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::noise::NoiseProfile;
use crate::photometric::ResampleFilter;

/// One operation with the exact parameters it was applied with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Stage {
    Blur { kernel: KernelSpec },
    Exposure { factor: f64 },
    Downsample { scale: usize, filter: ResampleFilter },
    Noise { profile: NoiseProfile, seed: u64 },
    SecondBlur { kernel: KernelSpec },
    /// Shrink by `scale` with `filter`, then enlarge back with bicubic.
    ResampleRoundTrip { scale: usize, filter: ResampleFilter },
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Blur { .. } => "blur",
            Stage::Exposure { .. } => "exposure",
            Stage::Downsample { .. } => "downsample",
            Stage::Noise { .. } => "noise",
            Stage::SecondBlur { .. } => "second_blur",
            Stage::ResampleRoundTrip { .. } => "resample_round_trip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppliedStage {
    /// Seed of the stream the stage's parameters were drawn from.
    pub sub_seed: u64,
    pub stage: Stage,
}

/// Provenance of one degraded image. Replaying the stages in order on the
/// same clean input reproduces the output bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegradationRecord {
    pub level: Level,
    pub image_index: u64,
    pub stages: Vec<AppliedStage>,
}

impl DegradationRecord {
    pub fn empty(level: Level) -> Self {
        DegradationRecord {
            level,
            image_index: 0,
            stages: Vec::new(),
        }
    }

    /// Compact JSON; the bytes the digest is computed over.
    pub fn to_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("record serializes")
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::format("degradation record", e.to_string()))
    }

    /// FNV-1a 64 of [`Self::to_bytes`], as 16 lowercase hex digits.
    pub fn digest(&self) -> String {
        format!("{:016x}", fnv1a64(&self.to_bytes()))
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
