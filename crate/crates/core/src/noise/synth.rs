use rand::Rng;
use rand_distr::StandardNormal;

use super::NoiseProfile;
use crate::raw::PackedRaw;
use crate::rng;

/// Noisy samples before the final clamp, planar order.
///
/// Samples are drawn from one ChaCha8 stream seeded with `seed`, visiting
/// channels, then rows, then columns.
pub fn shot_read_unclamped(p: &PackedRaw, prof: &NoiseProfile, seed: u64) -> Vec<f32> {
    if prof.lambda_shot == 0.0 && prof.lambda_read == 0.0 {
        return p.as_slice().to_vec();
    }
    let mut rng = rng::stream(seed);
    p.as_slice()
        .iter()
        .map(|&x| {
            let x = f64::from(x);
            let std = prof.variance(x).max(0.0).sqrt();
            let z: f64 = rng.sample(StandardNormal);
            (x + std * z) as f32
        })
        .collect()
}

/// Adds shot-read noise and clamps to `[0, 1]`. A zero profile returns the
/// input unchanged.
pub fn sample_shot_read(p: &PackedRaw, prof: &NoiseProfile, seed: u64) -> PackedRaw {
    let mut data = shot_read_unclamped(p, prof, seed);
    for v in &mut data {
        *v = v.clamp(0.0, 1.0);
    }
    PackedRaw::from_planar(p.width(), p.height(), data).expect("shape preserved")
}
