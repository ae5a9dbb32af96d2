//! Reproducible randomness.
//!
//! Streams are ChaCha8 seeded through `SeedableRng::seed_from_u64`, which is
//! specified independently of platform and word size. Sub-streams are derived
//! with the SplitMix64 finaliser, a bijection on `u64`, so distinct indices
//! always give distinct seeds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Default seed when neither `--seed` nor `QLFD_SEED` is given.
pub const DEFAULT_SEED: u64 = 0x5eed_1fd0;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the `index`-th sub-stream of `seed`; injective in `index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Seed for a named stage, so stages do not share streams.
pub fn stage_seed(seed: u64, stage: &str) -> u64 {
    stage.bytes().fold(splitmix64(seed), |acc, b| splitmix64(acc ^ b as u64))
}
