//! Seed derivation.
//!
//! Every stochastic draw in the crate comes from a [`ChaCha8Rng`] seeded with
//! [`SeedableRng::seed_from_u64`]. Per-image and per-stage seeds are derived by
//! folding the parts through the SplitMix64 finalizer, so a stream depends only
//! on `(master seed, image index, stage tag)` and never on processing order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds an ordered list of words into one seed.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x5241_5746_4f52_4745, |acc, &p| mix64(acc ^ mix64(p)))
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
