//! Position-keyed random streams.
//!
//! Every draw is addressed by `(seed, stream, block)` rather than by how many
//! draws happened before it, so work can be split across threads and replayed
//! in any order with identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Words reserved for each block inside a stream.
const BLOCK_WORDS: u32 = 20;

/// A ChaCha8 generator positioned at `block` of `stream` under `seed`.
pub fn keyed_stream(seed: u64, stream: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(block) << BLOCK_WORDS);
    rng
}

/// Mixes position indices into a child seed (splitmix64 finalizer per part).
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(seed ^ 0x9E37_79B9_7F4A_7C15), |acc, &p| {
        mix64(acc.wrapping_add(0x9E37_79B9_7F4A_7C15) ^ mix64(p.wrapping_add(0xD1B5_4A32_D192_ED03)))
    })
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
