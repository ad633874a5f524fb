//! Quantile forecasting objective, pluggable description-conditioned
//! scorers, and a pure-math reference of the gated fusion update.

mod error;
mod fusion;
mod naive;
mod quantile;
mod remote;

pub use error::ScoringError;
pub use fusion::{gated_fusion_forward, sigmoid, FusionInputs, GATE_INIT, LN_EPSILON};
pub use naive::SeasonalNaiveScorer;
pub use quantile::{
    batch_horizon_loss, full_objective, horizon_loss, log_decay_weights, pinball, score,
    ForecastHead, QuantileForecast, QuantileLevels, TargetBundle,
};
pub use remote::RemoteScorer;

/// A description-conditioned forecaster: given raw history, the agent's
/// morphology description, and the requested horizons, produce normalized
/// quantile predictions.
pub trait Scorer: Send + Sync {
    fn forecast(
        &self,
        history: &[f64],
        description: &str,
        horizons: &[usize],
        levels: &QuantileLevels,
    ) -> Result<QuantileForecast, ScoringError>;
}
