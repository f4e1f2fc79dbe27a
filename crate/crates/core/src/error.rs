use thiserror::Error;

/// Errors raised by the solvers and the input parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument lies outside the domain of the operation.
    #[error("{name} = {value} is outside the allowed range {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A probability vector, joint table or channel row failed validation.
    #[error("invalid pmf `{name}`: {reason}")]
    InvalidPmf { name: String, reason: String },

    /// Array shapes that must agree do not.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// No admissible test channel meets the distortion target.
    #[error("infeasible distortion target: {0}")]
    Infeasible(String),

    /// A bounded search ran out of candidates without meeting its goal.
    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    /// Malformed input document or command-line parameter.
    #[error("bad field `{field}`: {reason}")]
    Format { field: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, range: &'static str) -> Self {
        Error::Domain { name, value, range }
    }

    pub(crate) fn pmf(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidPmf {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn format(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Checks `lo <= x <= hi` (NaN fails).
pub(crate) fn check_closed(name: &'static str, x: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if x >= lo && x <= hi {
        Ok(())
    } else {
        Err(Error::domain(name, x, range))
    }
}

/// Checks `lo < x < hi` (NaN fails).
pub(crate) fn check_open(name: &'static str, x: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if x > lo && x < hi {
        Ok(())
    } else {
        Err(Error::domain(name, x, range))
    }
}
