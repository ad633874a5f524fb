use morphocast_gateway::GatewayError;
use morphocast_runtime::RuntimeError;

/// Failures raised while building or quality-checking a corpus.
#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    /// A windowing or masking configuration violates its own constraints.
    #[error("bad config: {0}")]
    BadConfig(String),

    /// A manifest or input record is structurally unusable.
    #[error("bad input: {0}")]
    BadInput(String),

    /// A judge request failed at the transport or protocol level.
    #[error(transparent)]
    Gateway(#[from] GatewayError),

    /// Rollout or description elicitation failed.
    #[error(transparent)]
    Runtime(#[from] RuntimeError),

    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),

    /// A manifest or JSONL line did not parse.
    #[error("malformed record: {0}")]
    Malformed(String),
}

impl CorpusError {
    /// Stable machine-readable code for CLI and log output.
    pub fn code(&self) -> &'static str {
        match self {
            CorpusError::BadConfig(_) => "BAD_CONFIG",
            CorpusError::BadInput(_) => "BAD_INPUT",
            CorpusError::Gateway(e) => e.code(),
            CorpusError::Runtime(e) => e.code(),
            CorpusError::Io(_) => "IO",
            CorpusError::Malformed(_) => "MALFORMED_RECORD",
        }
    }
}
