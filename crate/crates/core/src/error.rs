use thiserror::Error;

/// Errors raised by the arithmetic and lattice layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("precision exhausted: {0}")]
    PrecisionLoss(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("degenerate action: last entry of gamma*omega vanishes at working precision")]
    DegenerateAction,
    #[error("zero additive polynomial has no leading coefficient")]
    ZeroPolynomial,
    #[error("division by zero: {0}")]
    DivisionByZero(String),
}

pub type Result<T> = std::result::Result<T, Error>;
