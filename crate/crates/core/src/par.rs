//! Data-parallel map over independent tasks, backed by rayon when the
//! `parallel` feature is enabled and by a plain loop otherwise.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the global rayon pool, or a dedicated pool of `threads` workers.
    #[default]
    Parallel,
    Threads(usize),
}

impl Execution {
    /// Whether this build can actually run tasks concurrently.
    pub const AVAILABLE: bool = cfg!(feature = "parallel");

    /// `Threads(n)` for a positive cap, `Parallel` otherwise.
    pub fn capped(threads: Option<usize>) -> Self {
        match threads {
            Some(0) | None => Self::Parallel,
            Some(1) => Self::Sequential,
            Some(n) => Self::Threads(n),
        }
    }
}

/// Applies `f` to every item, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel => parallel_map(items, f, None),
        Execution::Threads(n) => parallel_map(items, f, Some(n)),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], f: F, threads: Option<usize>) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let run = || items.par_iter().map(&f).collect();
    match threads {
        None => run(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: &[T], f: F, _threads: Option<usize>) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}
