//! Reproducible random streams.
//!
//! Every independent unit of work (a point/centroid pair, a shot batch, a
//! synthetic dataset) draws from its own ChaCha stream selected by a key, so
//! results do not depend on scheduling order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a key path into a single stream id.
pub fn stream_id(key: &[u64]) -> u64 {
    key.iter()
        .fold(0x6A09_E667_F3BC_C909, |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

/// The stream for `key` under `seed`.
pub fn stream(seed: u64, key: &[u64]) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(key));
    rng
}
