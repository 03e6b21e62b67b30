use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected width {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("capacity exceeded for {what}: requested {requested}, limit {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid distribution: {0}")]
    InvalidPmf(String),

    #[error("invalid operator: {0}")]
    Validity(String),

    #[error("trial budget of {cap} exhausted without acceptance")]
    BudgetExceeded { cap: u64 },

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error("binarization failed: best threshold gap {best:.6} is below the guaranteed {required:.6}")]
    ReductionFailure { best: f64, required: f64 },

    #[error("infeasible request: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
