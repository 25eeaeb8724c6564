//! Execution policy for the data-parallel loops.
//!
//! Every parallel loop in the crate goes through [`map_indexed`]: work is split
//! into a fixed set of indexed chunks, each chunk is reduced sequentially, and the
//! per-chunk partials are combined in index order with compensated summation.
//! The result therefore does not depend on the number of threads, and the
//! sequential path produces bit-identical output.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise falls back
    /// to [`Execution::Sequential`].
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Environment variable read by [`init_threads_from_env`].
pub const THREADS_ENV: &str = "WIGMOM_THREADS";

/// Sizes the global worker pool. Without the `parallel` feature this is a no-op.
pub fn init_threads(threads: usize) -> crate::Result<()> {
    if threads == 0 {
        return Err(crate::Error::InvalidArgument(
            "thread count must be >= 1".into(),
        ));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
    Ok(())
}

/// Applies [`THREADS_ENV`] if it is set; returns the requested count.
pub fn init_threads_from_env() -> crate::Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| crate::Error::Parse(format!("{THREADS_ENV}='{raw}' is not a thread count")))?;
    init_threads(threads)?;
    Ok(Some(threads))
}

/// Evaluates `f(0..n)` and returns the results in index order.
pub fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Sums `f(i)` for `i in 0..n`, chunked over the outermost index.
pub fn sum_indexed<F>(exec: Execution, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    compensated_sum(map_indexed(exec, n, f))
}
