use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity error: {0}")]
    Arity(String),
    #[error("input is not symmetric")]
    NotSymmetric,
    #[error("division is not exact")]
    NotExact,
    #[error("coefficient is not integral after substitution")]
    NonIntegral,
    #[error("index out of range: {0}")]
    Index(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("element is zero")]
    Zero,
    #[error("element is not in the null-residue space")]
    NotInU,
    #[error("target lies outside the span")]
    OutsideSpan,
    #[error("invalid reduction step: {0}")]
    InvalidStep(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("all sample points annihilate the comparison polynomial")]
    Degenerate,
}

pub type Result<T> = std::result::Result<T, Error>;
