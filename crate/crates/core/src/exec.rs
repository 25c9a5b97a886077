//! Parallel or sequential mapping over enumerated tuple lists.
//!
//! With the `parallel` feature (on by default) the heavy per-tuple work runs
//! on a rayon pool; order of results always matches input order, so callers
//! are deterministic either way. `par = false` forces the sequential path,
//! which backs the `*_sequential` entry points used by the benchmarks.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map_vec<T, U, F>(par: bool, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par {
        return items.par_iter().map(&f).collect();
    }
    let _ = par;
    items.iter().map(f).collect()
}
