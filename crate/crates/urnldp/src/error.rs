use thiserror::Error;

/// Library-wide error type.
///
/// Variants map onto the CLI exit-code categories: `Parse` -> 2,
/// `Validation` and `Domain` -> 3, `Numeric` -> 4.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration document could not be read.
    #[error("parse error: {0}")]
    Parse(String),
    /// Structurally valid input violating a documented invariant.
    #[error("validation error: {0}")]
    Validation(String),
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical procedure failed to converge or left its valid range.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// Exit-code category used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Validation(_) | Error::Domain(_) => 3,
            Error::Numeric(_) => 4,
        }
    }
}
