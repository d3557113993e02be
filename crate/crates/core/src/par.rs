//! Parallel-map shim.
//!
//! With the default `parallel` feature the heavy per-fixed-point loops
//! fan out over rayon's global pool; without it the same code runs
//! sequentially. Callers get identical results either way — every reduce
//! step collects into a `Vec` first, so floating-point or ordering
//! nondeterminism cannot creep in.

/// Map `f` over `items`, in parallel when the `parallel` feature is
/// enabled, preserving input order in the output.
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Like [`par_map`] but for fallible maps: the first error wins.
pub fn par_try_map<T, U, E, F>(items: Vec<T>, f: F) -> Result<Vec<U>, E>
where
    T: Send,
    U: Send,
    E: Send,
    F: Fn(T) -> Result<U, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}
