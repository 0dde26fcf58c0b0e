use std::io;

use thiserror::Error;

/// Errors produced anywhere in the assessment pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("malformed Y4M header: {0}")]
    MalformedHeader(String),

    #[error("truncated payload in frame {frame}")]
    TruncatedFrame { frame: usize },

    #[error("unsupported chroma subsampling `{0}`")]
    UnsupportedChroma(String),

    #[error("no frames")]
    NoFrames,

    #[error("unsupported audio format: {0}")]
    UnsupportedAudio(String),

    #[error("zero-length data chunk")]
    EmptyAudio,

    #[error("wav decoding failed: {0}")]
    Wav(#[from] hound::Error),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} too small: need at least {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("subject `{0}` has zero score variance")]
    ZeroVarianceSubject(String),

    #[error("no grid point converged")]
    NoConvergence,

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
