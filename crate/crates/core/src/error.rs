use thiserror::Error;

/// Errors raised by the census engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order must be at least 3, got {0}")]
    InvalidOrder(i64),
    #[error("operation requires an even group order, got p = {0}")]
    OddOrder(u32),
    #[error("words belong to different groups (p = {0} and p = {1})")]
    MixedParams(u32, u32),
    #[error("class has finite order; reciprocity analysis needs at least two syllables")]
    Torsion,
    #[error("offset {0} is not a reversal offset of this class")]
    InvalidOffset(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("recurrence seed has {got} terms, needs at least {needed}")]
    ShortSeed { got: usize, needed: usize },
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("sequence term at index {0} is zero beyond the base segment")]
    ZeroTerm(usize),
    #[error(transparent)]
    Parse(#[from] crate::word::ParseError),
    #[error("value {numerator}/{denominator} is not an integer")]
    NonIntegral { numerator: num_bigint::BigInt, denominator: u32 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("decode error: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
