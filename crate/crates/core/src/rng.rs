//! Seeding contract: one master seed per run, explicit streams everywhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream type used by every stochastic operation in the crate.
pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit FNV-1a over bytes (unlike `DefaultHasher`, fixed across
/// toolchains).
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Seed for one experiment cell, independent of scheduling order.
pub fn cell_seed(master: u64, problem: &str, algorithm: &str, seed_index: u64) -> u64 {
    let mut h = mix64(master);
    h = mix64(h ^ fnv1a(problem.as_bytes()));
    h = mix64(h ^ fnv1a(algorithm.as_bytes()));
    mix64(h ^ seed_index)
}
