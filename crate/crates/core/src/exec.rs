//! Execution strategy for the embarrassingly parallel parts.
//!
//! Every parallel entry point maps a fixed item list and merges in item
//! order, so results are byte-identical across strategies and worker
//! counts; parallelism only changes wall time.

/// How independent work items are dispatched.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Parallelism {
    #[default]
    Sequential,
    #[cfg(feature = "parallel")]
    Rayon,
}

impl Parallelism {
    /// The fastest strategy compiled in.
    pub fn max_available() -> Self {
        #[cfg(feature = "parallel")]
        {
            Parallelism::Rayon
        }
        #[cfg(not(feature = "parallel"))]
        {
            Parallelism::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving item order in the result.
pub fn map_collect<T, R, F>(par: Parallelism, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match par {
        Parallelism::Sequential => items.into_iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }
    }
}

/// `map_collect` with the item's position passed through.
pub fn map_collect_indexed<T, R, F>(par: Parallelism, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(usize, T) -> R + Sync + Send,
{
    match par {
        Parallelism::Sequential => items
            .into_iter()
            .enumerate()
            .map(|(i, t)| f(i, t))
            .collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => {
            use rayon::prelude::*;
            items
                .into_par_iter()
                .enumerate()
                .map(|(i, t)| f(i, t))
                .collect()
        }
    }
}
