use thiserror::Error;

use crate::standard::StandardKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} must be a positive integer")]
    NonPositive(&'static str),
    #[error("ell = {0} is too large: |GL2(ell)| overflows 64 bits")]
    Overflow(u64),
    #[error("matrix is singular modulo {0}")]
    Singular(u64),
    #[error("matrices over different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),
    #[error("group of order {order} exceeds the enumeration budget of {budget}")]
    BudgetExceeded { order: usize, budget: usize },
    #[error("a divisor interval needs nonempty lower and upper bound sets")]
    EmptyBounds,
    #[error("exclusion {0} is not a member of the unexcluded interval")]
    DeadExclusion(u64),
    #[error("no closed form for {0}")]
    NoFormula(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("{0:?} has no `belongs to` notion")]
    NoBelongsNotion(StandardKind),
    #[error("catalog: {0}")]
    Catalog(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
