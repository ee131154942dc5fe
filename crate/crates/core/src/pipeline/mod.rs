//! Composition of degradations into levels I–IV with seeded parameter
//! sampling and replayable provenance.
//!
//! Stage order is fixed: primary blur, exposure (III, IV), downsampling
//! (II–IV), shot-read noise, then for level IV only an optional second kernel
//! and an optional extra down/up resampling round trip. Each stage draws from
//! its own stream seeded by `(master seed, image index, stage)`, and always
//! consumes its gate draw first, so enabling or disabling one stage never
//! shifts the parameters of another.

mod config;
mod dataset;
mod record;

pub use config::{DegradationConfig, KernelPool, Level, SecondKernelSource, StageProbabilities};
pub use dataset::{discover_inputs, read_record, synth_dataset, MANIFEST_NAME, ManifestEntry, PatchConfig, SynthConfig, SynthReport};
pub use record::{fnv1a64, AppliedStage, DegradationRecord, Stage};

use rand::{Rng, RngCore};

use crate::error::Result;
use crate::kernels::convolve;
use crate::noise::{registry, sample_shot_read};
use crate::photometric::{downsample, exposure_scale, upsample_bicubic};
use crate::raw::PackedRaw;
use crate::rng;

const TAG_BLUR: u64 = 1;
const TAG_EXPOSURE: u64 = 2;
const TAG_NOISE: u64 = 3;
const TAG_SECOND_KERNEL: u64 = 4;
const TAG_RESAMPLE: u64 = 5;

const ROUND_TRIP_SCALE: usize = 2;

pub fn apply_stage(img: &PackedRaw, stage: &Stage) -> Result<PackedRaw> {
    match stage {
        Stage::Blur { kernel } | Stage::SecondBlur { kernel } => convolve(img, &kernel.build()?),
        Stage::Exposure { factor } => exposure_scale(img, *factor),
        Stage::Downsample { scale, filter } => downsample(img, *scale, *filter),
        Stage::Noise { profile, seed } => Ok(sample_shot_read(img, profile, *seed)),
        Stage::ResampleRoundTrip { scale, filter } => {
            upsample_bicubic(&downsample(img, *scale, *filter)?, *scale)
        }
    }
}

struct StageDraw {
    sub_seed: u64,
    rng: rand_chacha::ChaCha8Rng,
    gate: f64,
}

fn stage_draw(image_seed: u64, tag: u64) -> StageDraw {
    let sub_seed = rng::derive_seed(&[image_seed, tag]);
    let mut rng = rng::stream(sub_seed);
    let gate = rng.random::<f64>();
    StageDraw { sub_seed, rng, gate }
}

/// Degrades `clean` according to `cfg`. The result is a pure function of
/// `(clean, cfg, image_index)`.
pub fn degrade(
    clean: &PackedRaw,
    cfg: &DegradationConfig,
    image_index: u64,
) -> Result<(PackedRaw, DegradationRecord)> {
    cfg.validate()?;
    let level = cfg.level;
    let full = level == Level::IV;
    let probs = &cfg.probabilities;
    let image_seed = rng::derive_seed(&[cfg.seed, image_index]);

    let mut stages: Vec<AppliedStage> = Vec::new();

    let mut d = stage_draw(image_seed, TAG_BLUR);
    if !full || d.gate < probs.blur {
        let kernel = cfg.kernels.sample(&mut d.rng);
        stages.push(AppliedStage {
            sub_seed: d.sub_seed,
            stage: Stage::Blur { kernel },
        });
    }

    let mut d = stage_draw(image_seed, TAG_EXPOSURE);
    if level == Level::III || (full && d.gate < probs.exposure) {
        let [lo, hi] = cfg.exposure;
        let factor = if lo == hi { lo } else { lo + d.rng.random::<f64>() * (hi - lo) };
        stages.push(AppliedStage {
            sub_seed: d.sub_seed,
            stage: Stage::Exposure { factor },
        });
    }

    if level.downsamples() {
        stages.push(AppliedStage {
            sub_seed: 0,
            stage: Stage::Downsample {
                scale: cfg.scale,
                filter: cfg.filter,
            },
        });
    }

    let mut d = stage_draw(image_seed, TAG_NOISE);
    let profile = registry::draw_profile_with(&cfg.noise, &mut d.rng);
    let seed = d.rng.next_u64();
    stages.push(AppliedStage {
        sub_seed: d.sub_seed,
        stage: Stage::Noise { profile, seed },
    });

    if full {
        let mut d = stage_draw(image_seed, TAG_SECOND_KERNEL);
        if d.gate < probs.second_kernel {
            let kernel = match cfg.second_kernel {
                SecondKernelSource::Motion => cfg.kernels.sample_motion(&mut d.rng),
                SecondKernelSource::Pool => cfg.kernels.sample(&mut d.rng),
            };
            stages.push(AppliedStage {
                sub_seed: d.sub_seed,
                stage: Stage::SecondBlur { kernel },
            });
        }

        let d = stage_draw(image_seed, TAG_RESAMPLE);
        let (lw, lh) = if level.downsamples() {
            (clean.width() / cfg.scale, clean.height() / cfg.scale)
        } else {
            (clean.width(), clean.height())
        };
        // Skipped silently when the low-resolution image cannot be halved.
        let divisible = lw % ROUND_TRIP_SCALE == 0 && lh % ROUND_TRIP_SCALE == 0;
        if d.gate < probs.resample && divisible {
            stages.push(AppliedStage {
                sub_seed: d.sub_seed,
                stage: Stage::ResampleRoundTrip {
                    scale: ROUND_TRIP_SCALE,
                    filter: cfg.filter,
                },
            });
        }
    }

    let record = DegradationRecord {
        level,
        image_index,
        stages,
    };
    let out = replay(clean, &record)?;
    Ok((out, record))
}

/// Applies the recorded stages to `clean` in record order.
pub fn replay(clean: &PackedRaw, rec: &DegradationRecord) -> Result<PackedRaw> {
    let mut img = clean.clone();
    for applied in &rec.stages {
        img = apply_stage(&img, &applied.stage)?;
    }
    Ok(img)
}
