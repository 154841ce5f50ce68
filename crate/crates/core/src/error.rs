use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A PGM stream could not be decoded. `offset` is the byte position at
    /// which decoding stopped.
    #[error("malformed PGM at byte offset {offset}: {reason}")]
    Format { offset: u64, reason: String },

    #[error("pixel stream ended early: received {received} of {expected} pixels")]
    Truncated { received: usize, expected: usize },

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
