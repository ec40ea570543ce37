use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("register of {0} basis states exceeds the configured bound")]
    SizeOverflow(usize),

    #[error("numeric guard tripped: {0}")]
    NumericGuard(String),

    #[error("no records pass the selection threshold {0}")]
    EmptySelection(f64),

    #[error("{0} time sampling is not implemented")]
    Unsupported(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
