//! Seeded random streams.
//!
//! Every stochastic component draws from ChaCha8 (`rand_chacha::ChaCha8Rng`),
//! seeded with `seed_from_u64`. ChaCha output is specified independently of
//! platform and word size, so a seed reproduces bit-identical runs anywhere.
//! Independent consumers (trials, folds, workers) get their own stream
//! number instead of sharing one generator, which keeps results independent
//! of evaluation order and thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Name of the generator, recorded in artifact metadata.
pub const ALGORITHM: &str = "ChaCha8";

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes a base seed with two indices (splitmix64 finalizer), for jobs that
/// each need their own seed.
pub fn derive(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
