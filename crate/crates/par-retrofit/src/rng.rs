//! Seed plumbing: one master seed fans out into named sub-seeds so that
//! each randomized stage (split, negatives, weights, MLP) can be replayed
//! independently.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// FNV-1a over the tag bytes; stable across platforms and releases.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive a named sub-seed from the master seed.
pub fn sub_seed(master: u64, tag: &str) -> u64 {
    splitmix64(master ^ fnv1a64(tag.as_bytes()))
}

/// Derive a per-epoch sub-seed (negatives and shuffling are re-drawn every
/// epoch; truncated reruns must replay the same epochs bit for bit).
pub fn epoch_seed(master: u64, tag: &str, epoch: usize) -> u64 {
    splitmix64(sub_seed(master, tag) ^ epoch as u64)
}

/// The deterministic RNG used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
