//! Seeded generators. Every random draw in the crate goes through here so
//! that a `(seed, index)` pair fully determines a trial.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type AuditRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> AuditRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for sub-run `index` of a run seeded with `seed` (splitmix64 finalizer
/// over both inputs).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
