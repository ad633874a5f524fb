use morphocast_scoring::ScoringError;

/// Failures in credit assignment or RL batch assembly.
#[derive(Debug, thiserror::Error)]
pub enum RewardError {
    /// A numeric parameter is out of range (for example a discount outside
    /// `[0, 1]`).
    #[error("bad parameter: {0}")]
    BadParam(String),

    /// A trajectory or score list is structurally unusable.
    #[error("bad input: {0}")]
    BadInput(String),

    /// Too few pooled returns to normalize over.
    #[error("degenerate group: {0}")]
    DegenerateGroup(String),

    /// An assistant turn has no recorded completion token count.
    #[error("missing tokenization: {0}")]
    MissingTokenization(String),

    /// The scorer failed while scoring one turn's description.
    #[error("scorer failed on turn {turn}: {source}")]
    Scorer {
        turn: usize,
        source: ScoringError,
    },

    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

impl RewardError {
    /// Stable machine-readable code for CLI and log output.
    pub fn code(&self) -> &'static str {
        match self {
            RewardError::BadParam(_) => "BAD_PARAM",
            RewardError::BadInput(_) => "BAD_INPUT",
            RewardError::DegenerateGroup(_) => "DEGENERATE_GROUP",
            RewardError::MissingTokenization(_) => "MISSING_TOKENIZATION",
            RewardError::Scorer { .. } => "SCORER",
            RewardError::Io(_) => "IO",
        }
    }
}
