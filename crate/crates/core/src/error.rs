use thiserror::Error;

/// Errors raised by the algebra layer and the text front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (limit is {max})", max = crate::arith::MAX_PRIME)]
    PrimeTooLarge(u64),
    #[error("characteristic mismatch: {0} vs {1}")]
    FieldMismatch(u32, u32),
    #[error("variable count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("variable count must be at least 1")]
    NoVariables,
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("element has level {found}, which exceeds the requested level {requested}")]
    LevelTooLow { found: u32, requested: u32 },
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("module vectors have inconsistent lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("line {line}: {msg}")]
    File { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
