//! Seeded random streams.
//!
//! Everything stochastic in the crate (weight init, dataset splits, epoch
//! shuffles, the synthetic generator) draws from a ChaCha8 stream derived
//! from a user seed plus a stream index, so independent consumers never
//! share or perturb each other's sequences.

use rand_chacha::ChaCha8Rng;

/// Derives an independent deterministic RNG from `(seed, stream)`.
pub fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
