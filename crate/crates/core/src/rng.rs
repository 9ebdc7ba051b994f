//! Reproducible per-replica random streams.
//!
//! Replica `i` of a run with master seed `s` draws from a ChaCha8 generator
//! keyed by four successive splitmix64 outputs started at `s`, on stream
//! `i`. Streams are independent of scheduling, so any split of the replicas
//! over workers sees the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One step of splitmix64: advances `state` and returns the mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for replica `replica` of the run seeded with `seed`.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replica);
    rng
}
