use morphocast_gateway::GatewayError;
use thiserror::Error;

/// Failures surfaced by the rollout loop and trajectory IO.
#[derive(Debug, Error)]
pub enum RuntimeError {
    /// The chat endpoint (or cassette) failed; carries the gateway cause.
    #[error("gateway: {0}")]
    Gateway(#[from] GatewayError),

    /// The model produced no usable final text even after tool schemas
    /// were withdrawn.
    #[error("model produced no final answer text")]
    EmptyFinal,

    /// A sample or config violated its invariants before any call was made.
    #[error("bad rollout input: {0}")]
    BadInput(String),

    /// Trajectory file access failed.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// A trajectory JSONL line did not parse.
    #[error("trajectory line {0}: {1}")]
    MalformedTrajectory(usize, String),
}

impl RuntimeError {
    /// Stable error code for reports and exit-status mapping.
    pub fn code(&self) -> &'static str {
        match self {
            RuntimeError::Gateway(_) => "GATEWAY",
            RuntimeError::EmptyFinal => "EMPTY_FINAL",
            RuntimeError::BadInput(_) => "BAD_INPUT",
            RuntimeError::Io(_) => "IO",
            RuntimeError::MalformedTrajectory(..) => "MALFORMED_TRAJECTORY",
        }
    }
}
