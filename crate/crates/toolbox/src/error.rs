//! Error type shared by every tool kernel.

use morphocast_series::SeriesError;

/// Failure raised by a tool kernel or by argument dispatch.
#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("window [{left}, {right}) out of bounds for series of length {len}")]
    OutOfBounds { left: usize, right: usize, len: usize },
    #[error("window contains no finite values")]
    AllMissing,
    #[error("window too short: {0}")]
    WindowTooShort(String),
    #[error("window has zero variance")]
    ZeroVariance,
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("window contains missing values")]
    HasMissing,
    #[error("regression matrix is singular")]
    Singular,
    #[error("unknown tool: {0}")]
    UnknownTool(String),
}

impl ToolError {
    /// Stable machine-readable code carried in error observations.
    pub fn code(&self) -> &'static str {
        match self {
            ToolError::OutOfBounds { .. } => "OUT_OF_BOUNDS",
            ToolError::AllMissing => "ALL_MISSING",
            ToolError::WindowTooShort(_) => "WINDOW_TOO_SHORT",
            ToolError::ZeroVariance => "ZERO_VARIANCE",
            ToolError::BadParam(_) => "BAD_PARAM",
            ToolError::HasMissing => "HAS_MISSING",
            ToolError::Singular => "SINGULAR",
            ToolError::UnknownTool(_) => "UNKNOWN_TOOL",
        }
    }
}

impl From<SeriesError> for ToolError {
    fn from(err: SeriesError) -> Self {
        match err {
            SeriesError::OutOfBounds { left, right, len } => {
                ToolError::OutOfBounds { left, right, len }
            }
            SeriesError::AllMissing => ToolError::AllMissing,
            other => ToolError::BadParam(other.to_string()),
        }
    }
}
