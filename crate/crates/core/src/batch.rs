//! Batch evaluation of independent instances.
//!
//! With the `parallel` feature (on by default) the batch helpers fan out over
//! rayon's global pool; without it they run sequentially. Output order always
//! follows input order, so results do not depend on the feature.

use crate::error::Result;
use crate::netcore::SimplexVector;
use crate::power::{evolve, AppraisalMap, PowerTrajectory};

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Applies `f` to every item, in parallel when the `parallel` feature is on.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
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

/// `f(0), f(1), ..., f(count - 1)`.
pub fn map_indices<R, F>(count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    let indices: Vec<usize> = (0..count).collect();
    map(&indices, |&k| f(k))
}

/// Evolves one appraisal trajectory per starting point.
pub fn evolve_batch(
    starts: &[SimplexVector],
    appraisal: &AppraisalMap,
    tol: f64,
    max_issues: usize,
) -> Vec<Result<PowerTrajectory>> {
    map(starts, |x0| evolve(x0, appraisal, tol, max_issues))
}
