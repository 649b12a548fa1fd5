//! Data-parallel helpers. With the `parallel` feature the [`Parallelism::Rayon`]
//! mode fans work out over rayon's pool; without it every mode runs
//! sequentially and produces identical results.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parallelism {
    #[default]
    Sequential,
    Rayon,
}

impl Parallelism {
    /// Rayon when built with the `parallel` feature, sequential otherwise.
    pub fn available() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Rayon
        } else {
            Parallelism::Sequential
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Rayon
    }

    /// Order-preserving map.
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
}

/// Runs `f` inside a dedicated pool of `threads` workers (the global pool when
/// `threads` is 0). Without the `parallel` feature this just calls `f`.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        return pool.install(f);
    }
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = Parallelism::Sequential.map(&xs, |x| x * x);
        let b = Parallelism::available().map(&xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(with_threads(2, || a.len()), 1000);
    }
}
