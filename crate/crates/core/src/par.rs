//! Data-parallel inner loops with a sequential fallback.
//!
//! Results are collected by index, so the parallel and sequential builds
//! produce bitwise-identical output.

#[cfg(feature = "parallel")]
pub(crate) fn indexed_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn indexed_map<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}
