//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper produces the same result in both modes; parallelism only
//! changes wall-clock time. Without the `parallel` feature the parallel mode
//! silently runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

impl Parallelism {
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// `f(0), …, f(n-1)` in index order.
#[allow(unused_variables)]
pub fn map_range<T, F>(mode: Parallelism, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// The hit with the smallest index, if any.
#[allow(unused_variables)]
pub fn find_first<T, F>(mode: Parallelism, n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.parallel() {
        return (0..n).into_par_iter().find_map_first(|i| f(i).map(|t| (i, t)));
    }
    (0..n).find_map(|i| f(i).map(|t| (i, t)))
}

/// Maps over a slice, keeping input order.
#[allow(unused_variables)]
pub fn map_slice<S, T, F>(mode: Parallelism, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.parallel() {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for mode in [Parallelism::Sequential, Parallelism::Parallel] {
            assert_eq!(map_range(mode, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(find_first(mode, 100, |i| (i % 7 == 3 && i > 20).then_some(i)), Some((24, 24)));
            assert_eq!(map_slice(mode, &[1, 2, 3], |x| x + 1), vec![2, 3, 4]);
        }
    }
}
