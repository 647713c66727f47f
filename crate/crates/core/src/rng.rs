//! Counter-based random substreams.
//!
//! Every stochastic step draws from a ChaCha8 stream selected by
//! `(master seed, operation, key)`. The key is usually a user id, so a
//! per-user computation sees the same numbers whatever thread runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Operations that consume randomness. Discriminants are part of the
/// reproducibility contract; append, never renumber.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
#[repr(u32)]
pub enum Stream {
    Ideology = 1,
    Follow = 2,
    Originals = 3,
    Retweets = 4,
    RandomBaseline = 5,
    IndegreeSample = 6,
    BaselineUsers = 7,
    UserScoreSample = 8,
    Bootstrap = 9,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for `(master, op, key)`.
pub fn substream(master: u64, op: Stream, key: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    let mut state = splitmix64(master ^ ((op as u64) << 56));
    for chunk in seed.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    rng.set_stream(key);
    rng
}
