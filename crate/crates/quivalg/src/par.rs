//! Data-parallel map over independent work items. With the `parallel` feature
//! (default) the rayon pool is used when requested; without it every call runs
//! sequentially. All workloads passed through here are pure, so the output is
//! identical either way and preserves input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when `parallel` is true and the
/// `parallel` feature is compiled in.
pub fn map_items<T, U, F>(parallel: bool, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            return items.into_par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    items.into_iter().map(f).collect()
}

/// Maps `f` over `0..n`, in parallel when requested, preserving index order.
pub fn map_range<U, F>(parallel: bool, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    map_items(parallel, (0..n).collect(), f)
}
