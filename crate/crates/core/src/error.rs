use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("invalid value: {0} is not finite")]
    InvalidValue(f64),
    #[error("degenerate support: all values are equal")]
    DegenerateSupport,
    #[error("empty interval [{0}, {1}]")]
    EmptyInterval(f64, f64),
    #[error("degenerate interval [{0}, {1}]")]
    DegenerateInterval(f64, f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid breakpoints: {0}")]
    InvalidBreakpoints(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("truncation failure after {0} rejections")]
    TruncationFailure(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
