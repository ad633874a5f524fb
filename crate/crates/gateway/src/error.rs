//! Gateway failure classification.

/// Error from a completion attempt, live or replayed.
#[derive(Debug, thiserror::Error)]
pub enum GatewayError {
    /// Connection failure, timeout, or a non-retryable HTTP status.
    #[error("transport failure: {0}")]
    Transport(String),

    /// HTTP 429 persisted through every retry attempt.
    #[error("rate limited after {attempts} attempts: {message}")]
    RateLimited { attempts: u32, message: String },

    /// The endpoint answered, but the body is not a usable completion.
    #[error("malformed response: {0}")]
    MalformedResponse(String),

    /// The live request does not match the next recorded entry.
    #[error("cassette mismatch: next recorded fingerprint is {expected}, request hashed to {got}")]
    CassetteMismatch { expected: String, got: String },

    /// Replay was asked for more completions than the cassette holds.
    #[error("cassette exhausted: all {0} recorded completions already replayed")]
    CassetteExhausted(usize),

    /// Cassette file could not be read or written.
    #[error("cassette io: {0}")]
    Io(#[from] std::io::Error),
}

impl GatewayError {
    /// Stable error code for logs and wire payloads.
    pub fn code(&self) -> &'static str {
        match self {
            GatewayError::Transport(_) => "TRANSPORT",
            GatewayError::RateLimited { .. } => "RATE_LIMITED",
            GatewayError::MalformedResponse(_) => "MALFORMED_RESPONSE",
            GatewayError::CassetteMismatch { .. } | GatewayError::CassetteExhausted(_) => {
                "CASSETTE_MISMATCH"
            }
            GatewayError::Io(_) => "IO",
        }
    }
}
