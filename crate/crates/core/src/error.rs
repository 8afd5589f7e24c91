use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A state or matrix failed one of its construction invariants.
    #[error("invariant `{invariant}` violated: {detail}")]
    Validation {
        invariant: &'static str,
        detail: String,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("not majorized: {0}")]
    NotMajorized(String),

    #[error("Kraus operator {index} is not incoherent")]
    NotIncoherent { index: usize },

    #[error("Kraus set is not complete (residual {residual:e})")]
    Incomplete { residual: f64 },

    #[error("solver did not converge after {iterations} rounds (bounds [{lower}, {upper}])")]
    NonConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
