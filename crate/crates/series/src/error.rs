//! Error type shared by series containers and window addressing.

use thiserror::Error;

/// Errors raised by series construction, window addressing, and ingestion.
#[derive(Debug, Error)]
pub enum SeriesError {
    /// The window does not address a non-empty in-bounds range.
    #[error("window [{left},{right}) out of bounds for series of length {len}")]
    OutOfBounds {
        left: usize,
        right: usize,
        len: usize,
    },

    /// The addressed window contains no finite value.
    #[error("window contains no finite values")]
    AllMissing,

    /// The series failed a construction invariant.
    #[error("invalid series: {0}")]
    Invalid(String),

    /// CSV ingestion failed.
    #[error("csv ingestion: {0}")]
    Csv(#[from] csv::Error),

    /// Metadata sidecar parsing failed.
    #[error("metadata sidecar: {0}")]
    Sidecar(#[from] serde_json::Error),

    /// File access failed.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl SeriesError {
    /// Stable machine-readable code for the wire error record.
    pub fn code(&self) -> &'static str {
        match self {
            SeriesError::OutOfBounds { .. } => "OUT_OF_BOUNDS",
            SeriesError::AllMissing => "ALL_MISSING",
            SeriesError::Invalid(_) => "INVALID_SERIES",
            SeriesError::Csv(_) => "CSV",
            SeriesError::Sidecar(_) => "SIDECAR",
            SeriesError::Io(_) => "IO",
        }
    }
}
