use alloc::string::String;

/// Errors raised by the separation toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unsupported sample rate {0} Hz")]
    UnsupportedRate(u32),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("singular data: {0}")]
    SingularData(String),
    #[error("node selection failed: {0}")]
    Selection(String),
    #[error("signal too short: {0}")]
    Length(String),
}

pub type Result<T> = core::result::Result<T, Error>;
