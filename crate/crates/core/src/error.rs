use thiserror::Error;

/// Errors raised by the exact kernel, the verification suites and the CLI.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("leading coefficient {0} is not invertible")]
    NonInvertible(String),

    #[error("cannot invert an exact non-monomial series without a truncation bound")]
    UnboundedInverse,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ring specification mismatch")]
    SpecMismatch,

    #[error("pole fails to cancel: {0}")]
    PoleNotCancelled(String),

    #[error("negative valuation {0} cannot be substituted into a form generator")]
    NegativeValuation(i64),

    #[error("insufficient order: {0}")]
    InsufficientOrder(String),

    #[error("decomposition residual nonzero at q^({num}/8) in {context}")]
    Decomposition { num: i64, context: String },

    #[error("series is not π-homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
