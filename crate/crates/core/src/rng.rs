//! Seeded randomness shared by generators and the benchmark harness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// ChaCha with 8 rounds, seeded through `SeedableRng::seed_from_u64`.
pub type InstanceRng = ChaCha8Rng;

/// Identifier written next to every seed in benchmark output.
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

pub fn seeded(seed: u64) -> InstanceRng {
    InstanceRng::seed_from_u64(seed)
}
