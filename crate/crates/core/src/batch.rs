//! Batches of independent samples.
//!
//! Sample `i` of a batch with master seed `s` draws from
//! [`RngHandle::substream`]`(s, i)`, so a batch gives identical results
//! whether it runs sequentially or on a thread pool.

use crate::rng::RngHandle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Runs on the rayon pool when the `parallel` feature is enabled and
    /// sequentially otherwise.
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

/// Evaluates `f(i, rng_i)` for `i` in `0..count`, in index order.
pub fn sample_batch_with<T, F>(execution: Execution, count: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut RngHandle) -> T + Sync,
{
    let run = |i: usize| f(i, &mut RngHandle::substream(seed, i as u64));
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(run).collect()
        }
        _ => (0..count).map(run).collect(),
    }
}

/// [`sample_batch_with`] using the default execution mode.
pub fn sample_batch<T, F>(count: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut RngHandle) -> T + Sync,
{
    sample_batch_with(Execution::default(), count, seed, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Network;
    use crate::wilson::sample_fusf_truncation;

    #[test]
    fn modes_agree() {
        let k4 =
            Network::from_unit_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let draw = |_: usize, rng: &mut RngHandle| sample_fusf_truncation(&k4, rng).unwrap().key();
        let a = sample_batch_with(Execution::Sequential, 200, 42, draw);
        let b = sample_batch_with(Execution::Parallel, 200, 42, draw);
        assert_eq!(a, b);
        let c = sample_batch_with(Execution::Sequential, 200, 43, draw);
        assert_ne!(a, c);
    }
}
