//! Deterministic parallel reductions: work is split into fixed chunks whose
//! partial results are combined in index order, so results do not depend on
//! the number of threads.

use rayon::prelude::*;

const CHUNK: usize = 2048;

/// `sum_{i < n} f(i)`.
pub(crate) fn det_sum(n: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(n);
            (c * CHUNK..end).map(&f).sum::<f64>()
        })
        .collect();
    parts.iter().sum()
}

/// Accumulates `f(i, acc)` into a vector of length `m` over `i < n`.
pub(crate) fn det_sum_vec(n: usize, m: usize, f: impl Fn(usize, &mut [f64]) + Sync) -> Vec<f64> {
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; m];
            let end = ((c + 1) * CHUNK).min(n);
            for i in c * CHUNK..end {
                f(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut out = vec![0.0; m];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    out
}

/// `f(i)` for `i < n`, in parallel, in index order.
pub(crate) fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}
