//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature these run on the current rayon pool; without
//! it they are plain iterator loops. Only element-wise maps are exposed: no
//! floating-point reduction is ever split across threads, so results are
//! bit-identical whatever the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many items the sequential loop is used.
#[cfg(feature = "parallel")]
pub(crate) const MIN_PARALLEL_LEN: usize = 256;

/// True when built with the `parallel` feature.
pub fn enabled() -> bool {
    cfg!(feature = "parallel")
}

pub(crate) fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if items.len() >= MIN_PARALLEL_LEN {
        return items.par_iter().with_min_len(64).map(f).collect();
    }
    items.iter().map(f).collect()
}

pub(crate) fn map_range<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if len >= MIN_PARALLEL_LEN {
        return (0..len).into_par_iter().with_min_len(64).map(f).collect();
    }
    (0..len).map(f).collect()
}

/// Like [`map_range`], with a scratch value built once per worker.
pub(crate) fn map_range_init<S, R, I, F>(len: usize, init: I, f: F) -> Vec<R>
where
    R: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if len >= MIN_PARALLEL_LEN {
        return (0..len)
            .into_par_iter()
            .with_min_len(64)
            .map_init(&init, |s, i| f(s, i))
            .collect();
    }
    let mut scratch = init();
    (0..len).map(|i| f(&mut scratch, i)).collect()
}

/// Applies `op(lo, hi)` to every butterfly pair of one FMT pass, where `hi`
/// is the partner of `lo` with bit `log2(half)` set.
pub(crate) fn butterfly<F>(values: &mut [f64], half: usize, op: F)
where
    F: Fn(&mut f64, &mut f64) + Sync + Send,
{
    let apply = |chunk: &mut [f64]| {
        let (lo, hi) = chunk.split_at_mut(half);
        lo.iter_mut().zip(hi.iter_mut()).for_each(|(a, b)| op(a, b));
    };
    #[cfg(feature = "parallel")]
    if values.len() >= 1 << 14 {
        let chunks = values.len() / (2 * half);
        if chunks >= 64 {
            values.par_chunks_mut(2 * half).for_each(apply);
        } else {
            for chunk in values.chunks_mut(2 * half) {
                let (lo, hi) = chunk.split_at_mut(half);
                lo.par_iter_mut()
                    .zip(hi.par_iter_mut())
                    .with_min_len(1024)
                    .for_each(|(a, b)| op(a, b));
            }
        }
        return;
    }
    values.chunks_mut(2 * half).for_each(apply);
}
