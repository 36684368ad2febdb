use thiserror::Error;

/// Errors raised by the library. Each variant maps to a CLI exit class.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("target not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}, target {target}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
        target: f64,
    },
    #[error("numeric failure: {message} (estimate {value}, error {abs_error}, {evaluations} evaluations)")]
    Numeric {
        message: String,
        value: f64,
        abs_error: f64,
        evaluations: usize,
    },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("relay field is empty")]
    EmptyField,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
