use morphocast_gateway::GatewayError;
use thiserror::Error;

/// Everything that can go wrong while evaluating forecasts.
#[derive(Debug, Error)]
pub enum MetricsError {
    /// No valid positions to average over.
    #[error("no valid forecast positions: {0}")]
    EmptyOmega(String),

    /// The in-sample seasonal naive error is zero, so MASE is undefined.
    #[error("zero scaling denominator: {0}")]
    ZeroDenominator(String),

    /// A sample violates the evaluation contract.
    #[error("bad input: {0}")]
    BadInput(String),

    /// The judge endpoint or cassette failed.
    #[error(transparent)]
    Gateway(#[from] GatewayError),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A line in an evaluation file does not decode.
    #[error("malformed record: {0}")]
    Malformed(String),
}

impl MetricsError {
    /// Stable code for logs and exit-status mapping.
    pub fn code(&self) -> &'static str {
        match self {
            MetricsError::EmptyOmega(_) => "EMPTY_OMEGA",
            MetricsError::ZeroDenominator(_) => "ZERO_DENOMINATOR",
            MetricsError::BadInput(_) => "BAD_INPUT",
            MetricsError::Gateway(err) => err.code(),
            MetricsError::Io(_) => "IO",
            MetricsError::Malformed(_) => "MALFORMED_RECORD",
        }
    }
}
