use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands live in different quadratic fields: sqrt({0}) and sqrt({1})")]
    MixedRadicand(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no continued fraction period found within {0} digits")]
    PeriodNotFound(usize),
    #[error("no passing threshold even at C = n = {0}")]
    NoThresholdBelowN(u64),
    #[error("trajectory hit a corner of square {square}")]
    CornerHit { square: usize },
    #[error("malformed file: {0}")]
    MalformedFile(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MixedRadicand(..) => "MixedRadicand",
            Error::DivisionByZero => "DivisionByZero",
            Error::PeriodNotFound(_) => "PeriodNotFound",
            Error::NoThresholdBelowN(_) => "NoThresholdBelowN",
            Error::CornerHit { .. } => "CornerHit",
            Error::MalformedFile(_) => "MalformedFile",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::PreconditionNotMet(_) => "PreconditionNotMet",
            Error::InvalidArgument(_) => "BadArgs",
        }
    }
}
