use thiserror::Error;

use crate::exactmath::BigRat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("factorization too hard: {digits}-digit composite cofactor exceeds the configured limit")]
    FactorizationTooHard { digits: usize },

    #[error("degenerate parameter t = {0}")]
    DegenerateParameter(BigRat),

    #[error("invalid t-value {0}: {1}")]
    InvalidT(String, String),

    #[error("chart violation: {0}")]
    ChartViolation(String),

    #[error("parameter at infinity")]
    ParameterAtInfinity,

    #[error("degenerate quartic (repeated root or perfect square)")]
    DegenerateQuartic,

    #[error("point with Y = 0 maps to 2-torsion; not mapped")]
    TwoTorsionImage,

    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("value {0} is not a rational square")]
    NotASquare(BigRat),

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("not a solution: {0}")]
    NotASolution(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("record {index} ({source_tag}) failed verification: {reason}")]
    CorpusVerification { index: usize, source_tag: String, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
