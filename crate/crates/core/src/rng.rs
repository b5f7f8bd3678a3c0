//! Replayable randomness.
//!
//! Every random instance is drawn from its own ChaCha8 stream, seeded by
//! mixing `(seed, suite name, instance index)` through SplitMix64. Any single
//! instance can therefore be regenerated without running the ones before it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

pub fn instance_seed(seed: u64, suite: &str, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ fnv1a(suite)).wrapping_add(index))
}

pub fn instance_rng(seed: u64, suite: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(instance_seed(seed, suite, index))
}
