//! Sequential / data-parallel execution switch.
//!
//! With the `parallel` feature disabled, [`Exec::Parallel`] silently runs the
//! sequential path, so callers never need to `cfg` on the feature.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maps `f` over `0..count`, preserving order.
    pub fn map_range<R, F>(self, count: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..count).into_par_iter().map(f).collect();
        }
        (0..count).map(f).collect()
    }

    /// Finds the maximum of `score(i)` over `0..count`.
    ///
    /// Ties resolve to the lowest index regardless of how the range is split
    /// across workers. `score` returning `None` skips the index.
    pub fn argmax<S>(self, count: u64, score: S) -> Option<(f64, u64)>
    where
        S: Fn(u64) -> Option<f64> + Sync + Send,
    {
        let scan = |lo: u64, hi: u64| {
            let mut best: Option<(f64, u64)> = None;
            for i in lo..hi {
                if let Some(v) = score(i) {
                    if best.is_none_or(|(b, _)| v > b) {
                        best = Some((v, i));
                    }
                }
            }
            best
        };
        #[cfg(feature = "parallel")]
        if self.is_parallel() && count > 1 {
            use rayon::prelude::*;
            let chunks = (rayon::current_num_threads() as u64 * 8).clamp(1, count);
            let step = count.div_ceil(chunks);
            return (0..chunks)
                .into_par_iter()
                .map(|c| scan(c * step, ((c + 1) * step).min(count)))
                .reduce(|| None, merge_best);
        }
        scan(0, count)
    }
}

#[cfg(feature = "parallel")]
fn merge_best(a: Option<(f64, u64)>, b: Option<(f64, u64)>) -> Option<(f64, u64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                Some(y)
            } else {
                Some(x)
            }
        }
    }
}
