//! The seeded generator used for every randomized step.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Default seed when none is supplied.
pub const DEFAULT_SEED: u64 = 20240607;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random samples tried before giving up over an infinite field.
pub const SAMPLE_BUDGET: usize = 32;
