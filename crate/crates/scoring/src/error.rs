//! Scoring failure classification.

/// Error from objective evaluation or a scorer backend.
#[derive(Debug, thiserror::Error)]
pub enum ScoringError {
    /// A parameter is outside its domain, e.g. a quantile level not in (0,1).
    #[error("bad parameter: {0}")]
    BadParam(String),

    /// Matrix or vector dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The history is too short for the requested seasonal lookback.
    #[error("window too short: {0}")]
    WindowTooShort(String),

    /// The remote scorer could not be reached or timed out.
    #[error("transport failure: {0}")]
    Transport(String),

    /// The remote scorer answered with an unusable payload.
    #[error("schema violation: {0}")]
    Schema(String),

    /// The history window has no finite values to normalize against.
    #[error("history contains no finite values")]
    AllMissing,
}

impl ScoringError {
    /// Stable error code for logs and wire payloads.
    pub fn code(&self) -> &'static str {
        match self {
            ScoringError::BadParam(_) => "BAD_PARAM",
            ScoringError::Shape(_) => "SHAPE",
            ScoringError::WindowTooShort(_) => "WINDOW_TOO_SHORT",
            ScoringError::Transport(_) => "TRANSPORT",
            ScoringError::Schema(_) => "SCHEMA",
            ScoringError::AllMissing => "ALL_MISSING",
        }
    }
}

impl From<morphocast_series::SeriesError> for ScoringError {
    fn from(err: morphocast_series::SeriesError) -> Self {
        match err {
            morphocast_series::SeriesError::AllMissing => ScoringError::AllMissing,
            other => ScoringError::BadParam(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_stable() {
        assert_eq!(ScoringError::BadParam("x".into()).code(), "BAD_PARAM");
        assert_eq!(ScoringError::Shape("x".into()).code(), "SHAPE");
        assert_eq!(ScoringError::WindowTooShort("x".into()).code(), "WINDOW_TOO_SHORT");
        assert_eq!(ScoringError::Transport("x".into()).code(), "TRANSPORT");
        assert_eq!(ScoringError::Schema("x".into()).code(), "SCHEMA");
        assert_eq!(ScoringError::AllMissing.code(), "ALL_MISSING");
    }
}
