use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("extension degree {0} out of range 1..=12")]
    DegreeOutOfRange(usize),
    #[error("{0} does not divide {1}")]
    NotADivisor(usize, usize),
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("zero argument where a nonzero element is required")]
    ZeroArgument,
    #[error("zero function")]
    ZeroFunction,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exponent {exp} out of range (must be < {limit})")]
    ExponentOutOfRange { exp: u64, limit: u64 },
    #[error("duplicate exponent {0}")]
    DuplicateExponent(u64),
    #[error("function is not Dembowski-Ostrom")]
    NotDo,
    #[error("function is not planar")]
    NotPlanar,
    #[error("field contexts differ (n = {0} vs n = {1})")]
    ContextMismatch(usize, usize),
    #[error("long-running computation disabled: {0}")]
    LongRunning(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("unknown identifier: {0}")]
    Unknown(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
