//! Execution policy for the data-parallel loops.
//!
//! With the `parallel` feature (default) the [`ExecPolicy::Parallel`] variant
//! dispatches through rayon. Without it every policy runs sequentially, so
//! results never depend on the feature set: each output slot is computed by
//! the same closure on the same input regardless of scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecPolicy {
    Sequential,
    #[default]
    Parallel,
}

impl ExecPolicy {
    /// Policy actually in effect once the feature set is taken into account.
    pub fn effective(self) -> ExecPolicy {
        if cfg!(feature = "parallel") {
            self
        } else {
            ExecPolicy::Sequential
        }
    }
}

/// `(0..n).map(f).collect()`, possibly in parallel. Output order is index order.
pub fn map_range<T, F>(policy: ExecPolicy, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match policy.effective() {
        ExecPolicy::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecPolicy::Parallel => (0..n).into_par_iter().map(f).collect(),
        #[cfg(not(feature = "parallel"))]
        ExecPolicy::Parallel => unreachable!(),
    }
}

/// `items.iter().map(f).collect()`, possibly in parallel.
pub fn map_slice<S, T, F>(policy: ExecPolicy, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    match policy.effective() {
        ExecPolicy::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecPolicy::Parallel => items.par_iter().map(f).collect(),
        #[cfg(not(feature = "parallel"))]
        ExecPolicy::Parallel => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let a = map_range(ExecPolicy::Sequential, 1000, f);
        let b = map_range(ExecPolicy::Parallel, 1000, f);
        assert_eq!(a, b);
        let items: Vec<u32> = (0..50).collect();
        assert_eq!(
            map_slice(ExecPolicy::Sequential, &items, |x| x * 3),
            map_slice(ExecPolicy::Parallel, &items, |x| x * 3)
        );
    }
}
