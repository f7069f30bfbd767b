use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation {0:?}: entries must be exactly 1..=n")]
    InvalidPermutation(Vec<u32>),

    #[error("cannot parse permutation from {0:?}")]
    Parse(String),

    #[error("duplicate pattern {0} in pattern set")]
    DuplicatePattern(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} is not in the required avoidance class")]
    NotInClass(String),

    #[error("structural invariant violated: {0}")]
    StructureViolation(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("too few terms: need at least {needed}, got {got}")]
    TooFewTerms { needed: usize, got: usize },

    #[error("malformed ODE text at line {line}: {reason}")]
    OdeFormat { line: usize, reason: String },

    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
}

pub type Result<T> = std::result::Result<T, Error>;
