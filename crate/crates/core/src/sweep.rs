//! Order-preserving grid evaluation.
//!
//! With the `parallel` feature (default) grid points are evaluated on the
//! rayon pool; without it they run sequentially. Results are always returned
//! in grid order, and each point is computed independently, so output does
//! not depend on scheduling.

use crate::error::Result;

/// Maps `f` over `items`, preserving order.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

/// Fallible [`map`]; the first error in grid order is returned.
pub fn try_map<T, U, F>(items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    map(items, f).into_iter().collect()
}

pub fn map_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// `start, start + step, ...` up to `stop` inclusive (with a half-step slack
/// against round-off). Points are computed as `start + k * step`, never by
/// accumulation.
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || stop < start {
        return Vec::new();
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| start + k as f64 * step).collect()
}
