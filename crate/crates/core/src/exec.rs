//! Execution strategy for the data-parallel scans.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] fans work
//! out over the rayon pool; without it every scan runs on the calling thread.

/// How independent work items are processed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this build can actually run work in parallel.
    pub const fn available() -> bool {
        cfg!(feature = "parallel")
    }

    pub(crate) fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Indices in `0..n` satisfying `f`, ascending.
    pub(crate) fn filter_range<F>(self, n: usize, f: F) -> Vec<u32>
    where
        F: Fn(u32) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n as u32).into_par_iter().filter(|&i| f(i)).collect()
            }
            _ => (0..n as u32).filter(|&i| f(i)).collect(),
        }
    }

    pub(crate) fn any<T, F>(self, items: &[T], f: F) -> bool
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        !self.all(items, |x| !f(x))
    }

    pub(crate) fn all<T, F>(self, items: &[T], f: F) -> bool
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().all(f)
            }
            _ => items.iter().all(f),
        }
    }
}

/// Default cap on the order of a group whose subgroup lattice may be enumerated.
pub const DEFAULT_BUDGET: usize = 20_000;

/// Knobs for the brute-force enumeration kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// Largest group order whose subgroups may be enumerated.
    pub budget: usize,
    pub exec: Exec,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
        }
    }
}

impl EnumConfig {
    pub fn with_budget(budget: usize) -> Self {
        EnumConfig {
            budget,
            ..Self::default()
        }
    }

    pub fn sequential(self) -> Self {
        EnumConfig {
            exec: Exec::Sequential,
            ..self
        }
    }

    pub(crate) fn check(&self, order: usize) -> crate::Result<()> {
        if order > self.budget {
            Err(crate::Error::BudgetExceeded {
                order,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }
}
