use thiserror::Error;

/// Errors raised by the engine.
///
/// `Structural` covers mismatched objects (different curves, degrees,
/// shapes), `Domain` covers inputs outside an operation's range, and
/// `Degenerate` signals a face or restriction that is not in general
/// position (an inadmissible configuration).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("field arithmetic: {0}")]
    Field(String),
    #[error("inadmissible functions: {0}")]
    Inadmissible(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn degenerate<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Degenerate(msg.into()))
}
