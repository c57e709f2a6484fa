use thiserror::Error;

/// Errors raised by the engine. Every variant is a usage error: the
/// computations themselves are total once their inputs are well formed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Vec<String>, right: Vec<String> },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unassigned symbol `{0}` in evaluation")]
    UnassignedSymbol(String),

    #[error("cannot combine elements of {left} and {right}")]
    MixedVariants { left: String, right: String },

    #[error("key {key} is not valid for {variant}")]
    InvalidKey { key: String, variant: String },

    #[error("invalid algebra variant: {0}")]
    InvalidVariant(String),

    #[error("field `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { field: field.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
