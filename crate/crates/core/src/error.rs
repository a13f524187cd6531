use thiserror::Error;

/// Errors produced by code construction, table design, decoding and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid code parameters: {0}")]
    Construction(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("table design failed: {0}")]
    Design(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed file: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.into())
        } else {
            Error::Format(e.to_string())
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
