//! Deterministic random streams.
//!
//! Every replication draws from its own ChaCha8 stream selected by
//! `(master_seed, stream_index)`, so results never depend on how
//! replications are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Independent generator for one replication.
pub fn stream(master_seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Derives a master seed for a named sub-experiment from a parent seed.
/// Uses splitmix64 mixing so nearby parents give unrelated children.
pub fn derive_seed(parent: u64, salt: u64) -> u64 {
    let mut z = parent ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
