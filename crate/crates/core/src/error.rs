use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The scalogram extremum is zero, so no saturation level can be read from it.
    #[error("degenerate wave: zero extremum at scale {alpha}")]
    DegenerateWave { alpha: f64 },

    #[error("coefficient of determination undefined: data has zero variance")]
    UndefinedRSquared,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
