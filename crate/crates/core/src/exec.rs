//! Execution policy for the data-parallel kernels.
//!
//! Every kernel that fans out over independent work items takes an [`Exec`].
//! Without the `parallel` feature both variants run on the calling thread.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
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
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maps `f` over `0..n`, preserving order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// First item (in slice order) for which `f` returns `Some`.
    ///
    /// The parallel variant may evaluate later items speculatively but always
    /// returns the same answer as the sequential one.
    pub fn find_map_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() && items.len() > 1 {
            return items.par_iter().find_map_first(f);
        }
        items.iter().find_map(f)
    }

    pub fn all<T, F>(self, items: &[T], f: F) -> bool
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() && items.len() > 1 {
            return items.par_iter().all(f);
        }
        items.iter().all(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_policies_agree() {
        let xs: Vec<u32> = (0..500).collect();
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(exec.map(&xs, |x| x * 2)[499], 998);
            assert_eq!(exec.find_map_first(&xs, |&x| (x % 97 == 96).then_some(x)), Some(96));
            assert!(exec.all(&xs, |&x| x < 500));
            assert_eq!(exec.map_range(4, |i| i + 1), vec![1, 2, 3, 4]);
        }
    }
}
