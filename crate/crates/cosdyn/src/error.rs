use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input that could not be decoded at all (malformed JSON, bad numbers).
    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    /// Structurally valid input that breaks a domain invariant.
    #[error("validation error in `{field}`: {reason}")]
    Validation { field: String, reason: String },

    /// A rejected operation argument (non-positive tolerance, zero horizon, ...).
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: String, reason: String },

    /// A witness construction whose normalizing norms vanished, so the
    /// scaling coefficients are undefined.
    #[error("degenerate witness: {0}")]
    DegenerateWitness(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl std::fmt::Display) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }

    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
