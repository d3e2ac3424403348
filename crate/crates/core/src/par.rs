//! Execution strategy for the exhaustive searches.
//!
//! With the `parallel` feature (default) searches are split across the rayon
//! pool; without it every strategy runs sequentially. Both paths return the
//! same, lowest-index result.

/// How an exhaustive search is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether this strategy actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Candidates scanned per task with one reusable state.
const CHUNK: u64 = 4096;

/// Lowest `i` in `0..total` with `pred(i)`.
pub fn find_first<P>(total: u64, strategy: Strategy, pred: P) -> Option<u64>
where
    P: Fn(u64) -> bool + Sync + Send,
{
    find_first_with(total, strategy, || (), |_, i| pred(i))
}

/// Like [`find_first`], with per-task scratch state created by `init`.
pub fn find_first_with<S, I, P>(total: u64, strategy: Strategy, init: I, pred: P) -> Option<u64>
where
    I: Fn() -> S + Sync + Send,
    P: Fn(&mut S, u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() && total > CHUNK {
        use rayon::prelude::*;
        return (0..total.div_ceil(CHUNK)).into_par_iter().find_map_first(|c| {
            let mut state = init();
            (c * CHUNK..total.min((c + 1) * CHUNK)).find(|&i| pred(&mut state, i))
        });
    }
    let _ = (strategy, CHUNK);
    let mut state = init();
    (0..total).find(|&i| pred(&mut state, i))
}

/// Order-preserving map over a slice.
pub fn map<T, U, F>(items: &[T], strategy: Strategy, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}
