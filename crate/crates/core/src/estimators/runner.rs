//! Deterministic parallel folding over sample indices.
//!
//! Samples are cut into fixed chunks independent of the thread count. Each
//! chunk is folded sequentially and the chunk results are merged in index
//! order, so the output never depends on scheduling.

use rayon::prelude::*;

use crate::error::Result;

/// Samples per chunk.
pub const CHUNK: u64 = 256;

/// Folds `fold(ctx, acc, sample)` over `0..samples` on the current rayon pool.
///
/// `init` creates per-chunk scratch space.
pub fn fold_samples<A, C, I, F, M>(samples: u64, init: I, fold: F, merge: M) -> Result<A>
where
    A: Default + Send,
    I: Fn() -> C + Sync,
    F: Fn(&mut C, &mut A, u64) -> Result<()> + Sync,
    M: Fn(&mut A, A),
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut ctx = init();
            let mut acc = A::default();
            for s in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                fold(&mut ctx, &mut acc, s)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<A>>>()?;
    let mut total = A::default();
    for part in parts {
        merge(&mut total, part);
    }
    Ok(total)
}

/// Elementwise addition of count vectors of possibly different lengths.
pub fn add_counts(total: &mut Vec<u64>, part: Vec<u64>) {
    if total.len() < part.len() {
        total.resize(part.len(), 0);
    }
    for (t, p) in total.iter_mut().zip(part) {
        *t += p;
    }
}
