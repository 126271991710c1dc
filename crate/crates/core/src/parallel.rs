//! Replicate execution. With the `parallel` feature replicates are spread over
//! the rayon pool; without it, or with [`Execution::Sequential`], they run in
//! order. Every replicate draws from its own seed stream, so both paths return
//! identical results.

use serde::{Deserialize, Serialize};

use crate::models::RngSeed;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `f(r, seed.child(r))` for r in 0..count, collected in replicate order.
pub fn map_replicates<T, F>(count: usize, seed: RngSeed, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, RngSeed) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..count)
            .into_par_iter()
            .map(|r| f(r, seed.child(r as u64)))
            .collect();
    }
    let _ = exec;
    (0..count).map(|r| f(r, seed.child(r as u64))).collect()
}

/// Same as [`map_replicates`] for fallible work; the first error wins.
pub fn try_map_replicates<T, E, F>(count: usize, seed: RngSeed, exec: Execution, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize, RngSeed) -> Result<T, E> + Sync + Send,
{
    map_replicates(count, seed, exec, f).into_iter().collect()
}

/// Parallel map over a slice, preserving order.
pub fn map_slice<A, T, F>(items: &[A], exec: Execution, f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(&f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Runs `f` inside a pool of `threads` workers (0 keeps the global pool).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn paths_agree() {
        let seed = RngSeed::new(42);
        let draw = |_: usize, s: RngSeed| s.rng().random::<u64>();
        let a = map_replicates(64, seed, Execution::Parallel, draw);
        let b = map_replicates(64, seed, Execution::Sequential, draw);
        assert_eq!(a, b);
        let sq = map_slice(&[1, 2, 3], Execution::Parallel, |x| x * x);
        assert_eq!(sq, vec![1, 4, 9]);
    }
}
