//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state is not normalized: ||amps||_2 = {norm}")]
    NotNormalized { norm: f64 },

    #[error("matrix is not unitary (max |U†U - I| entry = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("duplicate subsystem index {0}")]
    DuplicateIndex(usize),

    #[error("total dimension {0} exceeds the dense-representation cap of {1} amplitudes")]
    TooLarge(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
