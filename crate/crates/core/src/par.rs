//! Data-parallel map helpers.
//!
//! With the `parallel` feature (default) the [`Execution::Parallel`] variant
//! dispatches to rayon; without it only the sequential path exists and every
//! caller falls back to a plain iterator.

/// How independent work items are scheduled. Defaults to the parallel
/// path when it is compiled in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// `(0..n).map(f)` collected in index order.
pub fn map_range<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
    }
}

/// `items.iter().map(f)` collected in order.
pub fn map_slice<I, T, F>(exec: Execution, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = map_range(Execution::Sequential, 100, |i| i * i);
        let def = map_range(Execution::default(), 100, |i| i * i);
        assert_eq!(seq, def);
        let items: Vec<u32> = (0..17).collect();
        assert_eq!(
            map_slice(Execution::Sequential, &items, |x| x + 1),
            map_slice(Execution::default(), &items, |x| x + 1)
        );
    }
}
