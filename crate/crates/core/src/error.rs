use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input data (shapes, empty masks, ...).
    InvalidInput(String),
    /// A configuration value outside its admissible range.
    InvalidConfig(String),
    /// Two buffers that must agree in size do not.
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    /// A metric is mathematically undefined for the given data.
    UndefinedMetric(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    pub(crate) fn mismatch(what: &'static str, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            what,
            expected,
            actual,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::DimensionMismatch {
                what,
                expected,
                actual,
            } => write!(f, "dimension mismatch for {what}: expected {expected}, got {actual}"),
            Error::UndefinedMetric(msg) => write!(f, "undefined metric: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
