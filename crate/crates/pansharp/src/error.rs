//! Error type shared by the whole crate.

use std::path::PathBuf;

use crate::bvls::BoundedLsqSolution;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Raster construction or combination with inconsistent shapes.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    /// Weight vector length does not match the band count it is applied to.
    #[error("length mismatch: {what} has length {actual}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A sample or parameter is NaN/infinite where a finite value is required.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// A parameter is outside its documented domain.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Histogram matching with a zero-spread source has no defined scale.
    #[error("histogram matching undefined: source standard deviation is zero")]
    ZeroSpread,

    /// The bounded least-squares solver ran out of iterations. The best
    /// iterate found so far is attached for diagnostics.
    #[error("bounded least-squares did not certify optimality within {iterations} iterations")]
    IterationLimit {
        iterations: usize,
        best: Box<BoundedLsqSolution>,
    },

    /// Raster file payload does not match its header.
    #[error("payload size mismatch for {path}: expected {expected} bytes, got {actual}")]
    PayloadSize {
        path: PathBuf,
        expected: u64,
        actual: u64,
    },

    /// Header declares a payload larger than the configured cap.
    #[error("payload of {requested} bytes exceeds the {cap} byte cap")]
    PayloadTooLarge { requested: u64, cap: u64 },

    /// Unsupported value in a raster header field.
    #[error("unsupported {field} in raster header: {value}")]
    UnsupportedHeader { field: &'static str, value: String },

    /// Malformed PGM input.
    #[error("invalid PGM file {path}: {reason}")]
    InvalidPgm { path: PathBuf, reason: String },

    /// Underlying I/O failure, with the path that triggered it.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed JSON (headers, weight files, experiment specs).
    #[error("invalid JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn dims(expected: impl ToString, actual: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
