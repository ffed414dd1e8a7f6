use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("box does not isolate a single root: {0}")]
    NotIsolating(String),
    #[error("precision budget exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("resultant degree {0} exceeds the configured cap")]
    DegreeOverflow(usize),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
    #[error("abstract symbol {0} has no numeric binding")]
    UnboundSymbol(String),
    #[error("exponent listed twice: {0}")]
    DuplicateExponent(String),
    #[error("exponent must be nonzero")]
    ZeroExponent,
    #[error("logarithm argument must be a positive real: {0}")]
    NonPositiveLogArgument(String),
    #[error("input element is zero")]
    ZeroInput,
    #[error("group is not discrete")]
    NotDiscrete,
    #[error("no small element found up to height {0}")]
    SearchExhausted(u64),
    #[error("enumeration of {0} candidates exceeds the oracle budget")]
    BudgetExceeded(u128),
    #[error("{0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
