//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns results in input order, so output is independent of how
//! the work was scheduled. Randomised work derives one generator per task from a
//! base seed up front, which keeps Monte Carlo results bit-identical between the
//! sequential and parallel paths.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// How a batch of independent tasks is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the rayon global pool. Without the `parallel` feature this behaves
    /// exactly like [`Execution::Sequential`].
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(exec: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Generator for replication `index` of a study seeded with `seed`.
///
/// Each replication gets its own ChaCha stream, so replications can run in any
/// order and still reproduce exactly.
pub fn replication_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

/// Runs `n` seeded replications of `f`, each with its own generator.
pub fn replicate<R, F>(exec: Execution, n: usize, seed: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> R + Sync + Send,
{
    map_range(exec, n, |i| {
        let mut rng = replication_rng(seed, i);
        f(i, &mut rng)
    })
}
