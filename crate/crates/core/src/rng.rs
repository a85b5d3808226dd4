//! Counter-based random streams.
//!
//! Every randomized task draws from a ChaCha stream selected by
//! `(seed, task index)`, so results do not depend on how tasks are scheduled
//! across worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Samples per task in [`chunked_sum`].
pub const CHUNK: usize = 1 << 14;

/// Sums `f` over `samples` draws split into fixed-size chunks. Chunk `k`
/// uses stream `k`; partial sums are merged in chunk order, so the result
/// is bit-identical for any thread count.
pub fn chunked_sum<T, F>(seed: u64, samples: usize, zero: T, f: F) -> T
where
    T: Send + Sync + Clone + std::ops::AddAssign,
    F: Fn(&mut ChaCha8Rng, usize, &mut T) + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, k as u64);
            let len = CHUNK.min(samples - k * CHUNK);
            let mut acc = zero.clone();
            f(&mut rng, len, &mut acc);
            acc
        })
        .collect();
    let mut total = zero;
    for p in partials {
        total += p;
    }
    total
}
