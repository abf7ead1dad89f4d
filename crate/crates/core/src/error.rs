use thiserror::Error;

/// Errors raised by the percolation laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Invalid construction parameter; `field` names the offending parameter.
    #[error("invalid configuration `{field}`: {message}")]
    Config { field: String, message: String },

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request was refused because it would blow up combinatorially.
    #[error("refused: {0}")]
    Refused(String),

    /// Tail data could not be fitted.
    #[error("unfittable: {0}")]
    Unfittable(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
