//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] runs on the
//! global rayon pool; without it every mode runs sequentially. Results are
//! always collected in input order, so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Index of the first item (in input order) for which `f` is true.
    pub fn position<T, F>(self, items: &[T], f: F) -> Option<usize>
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().position_first(f);
        }
        items.iter().position(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = Exec::Sequential.map(&xs, |x| x * x);
        let b = Exec::Parallel.map(&xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(
            Exec::Parallel.position(&xs, |&x| x > 500),
            Exec::Sequential.position(&xs, |&x| x > 500)
        );
        assert_eq!(Exec::Parallel.map_range(5, |i| i + 1), vec![1, 2, 3, 4, 5]);
    }
}
