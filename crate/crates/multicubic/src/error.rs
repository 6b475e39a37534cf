use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("singular evaluation at {context}: {reason}")]
    Singular { context: String, reason: String },

    #[error("unsupported exponent: {0}")]
    UnsupportedExponent(String),

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("parse error at {context}: {reason}")]
    Parse { context: String, reason: String },

    #[error("exact mode cannot represent {0}")]
    Inexact(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(context: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
