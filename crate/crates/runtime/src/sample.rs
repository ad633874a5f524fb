//! The per-window forecasting task handed to the agent.

use morphocast_series::Metadata;
use serde::{Deserialize, Serialize};

use crate::RuntimeError;

/// Everything the agent sees about one sample: the visible history window,
/// the two forecast horizons, and the metadata sidecar (or its masked form).
///
/// Timestamp bounds are free-form strings; `None` renders as `unavailable`
/// in the user prompt. Tool calls during the rollout address the history
/// slice only, indices `0..history.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleContext {
    pub sample_id: String,
    #[serde(with = "nullable_floats")]
    pub history: Vec<f64>,
    pub horizon_short: usize,
    pub horizon_long: usize,
    pub metadata: Metadata,
    pub metadata_masked: bool,
    #[serde(default)]
    pub history_start: Option<String>,
    #[serde(default)]
    pub history_end: Option<String>,
    #[serde(default)]
    pub future_short_start: Option<String>,
    #[serde(default)]
    pub future_short_end: Option<String>,
    #[serde(default)]
    pub future_long_start: Option<String>,
    #[serde(default)]
    pub future_long_end: Option<String>,
}

impl SampleContext {
    /// A context without timestamp bounds; use the public fields to attach
    /// them when the source data carries a calendar.
    pub fn new(
        sample_id: impl Into<String>,
        history: Vec<f64>,
        horizon_short: usize,
        horizon_long: usize,
        metadata: Metadata,
        metadata_masked: bool,
    ) -> Result<Self, RuntimeError> {
        let sample = SampleContext {
            sample_id: sample_id.into(),
            history,
            horizon_short,
            horizon_long,
            metadata,
            metadata_masked,
            history_start: None,
            history_end: None,
            future_short_start: None,
            future_short_end: None,
            future_long_start: None,
            future_long_end: None,
        };
        sample.validate()?;
        Ok(sample)
    }

    /// Checks the invariants: non-empty history, both horizons at least 1.
    pub fn validate(&self) -> Result<(), RuntimeError> {
        if self.history.is_empty() {
            return Err(RuntimeError::BadInput(format!(
                "sample {}: history must hold at least one value",
                self.sample_id
            )));
        }
        if self.horizon_short < 1 || self.horizon_long < 1 {
            return Err(RuntimeError::BadInput(format!(
                "sample {}: horizons must be >= 1, got ({}, {})",
                self.sample_id, self.horizon_short, self.horizon_long
            )));
        }
        Ok(())
    }
}

/// JSON round-trip for float lists that may contain NaN (missing values).
/// serde_json writes non-finite floats as `null`; reading maps `null` back
/// to NaN instead of failing.
pub mod nullable_floats {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(values: &[f64], serializer: S) -> Result<S::Ok, S::Error> {
        values.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<f64>, D::Error> {
        let raw = Vec::<Option<f64>>::deserialize(deserializer)?;
        Ok(raw.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
    }
}
