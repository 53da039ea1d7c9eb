//! Seeded random streams. ChaCha output is stable across platforms and releases.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub const STREAM_LINK_TO_FCU: u64 = 1;
pub const STREAM_LINK_TO_COMPANION: u64 = 2;
pub const STREAM_PERCEPT: u64 = 3;
