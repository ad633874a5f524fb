//! HTTP scorer backend, so a served neural forecaster can plug into the
//! same reward path as the built-in baseline.

use crate::{ForecastHead, QuantileForecast, QuantileLevels, Scorer, ScoringError};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::time::Duration;

#[derive(Serialize)]
struct ScoreRequest<'a> {
    history: Vec<Value>,
    description: &'a str,
    horizons: &'a [usize],
    quantiles: &'a [f64],
}

#[derive(Deserialize)]
struct ScoreResponse {
    heads: Vec<WireHead>,
}

#[derive(Deserialize)]
struct WireHead {
    horizon: usize,
    values: Vec<Vec<f64>>,
}

/// Scorer that POSTs each request to a forecasting service. Missing history
/// values travel as JSON nulls.
pub struct RemoteScorer {
    http: reqwest::blocking::Client,
    endpoint: String,
}

impl RemoteScorer {
    pub fn new(endpoint: impl Into<String>) -> Result<Self, ScoringError> {
        Self::with_timeout(endpoint, Duration::from_secs(60))
    }

    pub fn with_timeout(endpoint: impl Into<String>, timeout: Duration) -> Result<Self, ScoringError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|err| ScoringError::Transport(format!("client setup: {err}")))?;
        Ok(RemoteScorer { http, endpoint: endpoint.into() })
    }
}

impl Scorer for RemoteScorer {
    fn forecast(
        &self,
        history: &[f64],
        description: &str,
        horizons: &[usize],
        levels: &QuantileLevels,
    ) -> Result<QuantileForecast, ScoringError> {
        let request = ScoreRequest {
            history: history
                .iter()
                .map(|&v| if v.is_finite() { Value::from(v) } else { Value::Null })
                .collect(),
            description,
            horizons,
            quantiles: levels.levels(),
        };
        let response = self
            .http
            .post(&self.endpoint)
            .json(&request)
            .send()
            .map_err(|err| ScoringError::Transport(format!("request to {}: {err}", self.endpoint)))?;
        let status = response.status();
        if !status.is_success() {
            return Err(ScoringError::Transport(format!(
                "scorer endpoint {} returned {status}",
                self.endpoint
            )));
        }
        let body: ScoreResponse = response
            .json()
            .map_err(|err| ScoringError::Schema(format!("unparseable scorer response: {err}")))?;

        if body.heads.len() != horizons.len() {
            return Err(ScoringError::Schema(format!(
                "scorer returned {} heads for {} horizons",
                body.heads.len(),
                horizons.len()
            )));
        }
        let mut heads = Vec::with_capacity(body.heads.len());
        for (wire, &expected) in body.heads.into_iter().zip(horizons) {
            if wire.horizon != expected {
                return Err(ScoringError::Schema(format!(
                    "scorer returned horizon {} where {expected} was requested",
                    wire.horizon
                )));
            }
            let head = ForecastHead::new(wire.horizon, wire.values, levels.len())
                .map_err(|err| ScoringError::Schema(err.to_string()))?;
            heads.push(head);
        }
        QuantileForecast::new(heads)
    }
}
