//! Seeded randomness.
//!
//! Every random experiment in this crate draws from [`ChaCha8Rng`]
//! (`rand_chacha` 0.9). Work that is split into blocks gives block `b` the
//! ChaCha stream `b` under the caller's seed, so results depend only on the
//! seed and never on how blocks are scheduled across threads.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Seed used when callers do not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_2017;

/// Number of samples handled by one independently seeded block.
pub const BLOCK_SIZE: usize = 4096;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Splits `total` items into `(block index, block length)` pairs.
pub fn blocks(total: usize) -> impl Iterator<Item = (u64, usize)> + Clone {
    let n = total.div_ceil(BLOCK_SIZE);
    (0..n).map(move |b| {
        let start = b * BLOCK_SIZE;
        (b as u64, BLOCK_SIZE.min(total - start))
    })
}
