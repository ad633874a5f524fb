//! Quantile forecasting objective: pinball loss under log-decay temporal
//! weights, averaged over quantile levels and horizon heads.

use crate::{Scorer, ScoringError};
use morphocast_series::NormStats;
use serde::{Deserialize, Serialize};

/// Ordered quantile levels, all strictly inside (0,1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct QuantileLevels(Vec<f64>);

impl QuantileLevels {
    pub fn new(levels: Vec<f64>) -> Result<Self, ScoringError> {
        if levels.is_empty() {
            return Err(ScoringError::BadParam("quantile levels must be non-empty".into()));
        }
        for &q in &levels {
            if !(q > 0.0 && q < 1.0) {
                return Err(ScoringError::BadParam(format!(
                    "quantile level {q} is outside (0, 1)"
                )));
            }
        }
        if levels.windows(2).any(|pair| pair[0] >= pair[1]) {
            return Err(ScoringError::BadParam(
                "quantile levels must be strictly increasing".into(),
            ));
        }
        Ok(QuantileLevels(levels))
    }

    /// The nine deciles 0.1, 0.2, …, 0.9.
    pub fn deciles() -> Self {
        QuantileLevels((1..=9).map(|i| i as f64 / 10.0).collect())
    }

    pub fn levels(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl TryFrom<Vec<f64>> for QuantileLevels {
    type Error = ScoringError;
    fn try_from(levels: Vec<f64>) -> Result<Self, Self::Error> {
        QuantileLevels::new(levels)
    }
}

impl From<QuantileLevels> for Vec<f64> {
    fn from(levels: QuantileLevels) -> Vec<f64> {
        levels.0
    }
}

/// Pinball loss 2|(y − ŷ)(𝟙[y ≤ ŷ] − q)| at level q.
pub fn pinball(y: f64, yhat: f64, q: f64) -> Result<f64, ScoringError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(ScoringError::BadParam(format!("quantile level {q} is outside (0, 1)")));
    }
    let indicator = if y <= yhat { 1.0 } else { 0.0 };
    Ok(2.0 * ((y - yhat) * (indicator - q)).abs())
}

/// Log-decay weights ω_t = (1/H)(ln H − ln t) for t = 1..H. The final step
/// always has weight zero; H = 0 yields an empty vector.
pub fn log_decay_weights(h: usize) -> Vec<f64> {
    let ln_h = (h as f64).ln();
    (1..=h).map(|t| (ln_h - (t as f64).ln()) / h as f64).collect()
}

/// Normalized targets for one horizon with a validity mask; masked-out
/// positions contribute nothing to the loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetBundle {
    targets: Vec<f64>,
    mask: Vec<bool>,
}

impl TargetBundle {
    pub fn new(targets: Vec<f64>, mask: Vec<bool>) -> Result<Self, ScoringError> {
        if targets.len() != mask.len() {
            return Err(ScoringError::Shape(format!(
                "{} targets with a {}-entry mask",
                targets.len(),
                mask.len()
            )));
        }
        Ok(TargetBundle { targets, mask })
    }

    /// Masks out every non-finite position.
    pub fn from_values(targets: Vec<f64>) -> Self {
        let mask = targets.iter().map(|v| v.is_finite()).collect();
        TargetBundle { targets, mask }
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// One horizon head's forecast: a horizon × levels matrix in normalized
/// space. Rows are sorted on construction so quantiles never cross.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastHead {
    pub horizon: usize,
    values: Vec<Vec<f64>>,
}

impl ForecastHead {
    pub fn new(
        horizon: usize,
        mut values: Vec<Vec<f64>>,
        n_levels: usize,
    ) -> Result<Self, ScoringError> {
        if values.len() != horizon {
            return Err(ScoringError::Shape(format!(
                "head for horizon {horizon} has {} rows",
                values.len()
            )));
        }
        for (t, row) in values.iter_mut().enumerate() {
            if row.len() != n_levels {
                return Err(ScoringError::Shape(format!(
                    "row {t} has {} quantile columns, expected {n_levels}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(ScoringError::Shape(format!("row {t} contains a non-finite value")));
            }
            row.sort_by(f64::total_cmp);
        }
        Ok(ForecastHead { horizon, values })
    }

    /// Row t: one prediction per quantile level, in level order.
    pub fn row(&self, t: usize) -> &[f64] {
        &self.values[t]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

/// A full forecast: one head per requested horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileForecast {
    heads: Vec<ForecastHead>,
}

impl QuantileForecast {
    pub fn new(heads: Vec<ForecastHead>) -> Result<Self, ScoringError> {
        if heads.is_empty() {
            return Err(ScoringError::Shape("forecast has no heads".into()));
        }
        Ok(QuantileForecast { heads })
    }

    pub fn heads(&self) -> &[ForecastHead] {
        &self.heads
    }
}

/// Masked single-sample horizon loss: Σ_t ω_t · mean_q pinball(ỹ_t, ŷ_{q,t}, q).
pub fn horizon_loss(
    head: &ForecastHead,
    targets: &TargetBundle,
    levels: &QuantileLevels,
) -> Result<f64, ScoringError> {
    if targets.len() != head.horizon {
        return Err(ScoringError::Shape(format!(
            "{} targets against a horizon-{} head",
            targets.len(),
            head.horizon
        )));
    }
    let weights = log_decay_weights(head.horizon);
    let mut total = 0.0;
    for (t, (&y, &valid)) in targets.targets().iter().zip(targets.mask()).enumerate() {
        if !valid {
            continue;
        }
        let row = head.row(t);
        let mut level_sum = 0.0;
        for (&yhat, &q) in row.iter().zip(levels.levels()) {
            level_sum += pinball(y, yhat, q)?;
        }
        total += weights[t] * level_sum / levels.len() as f64;
    }
    Ok(total)
}

/// Batch mean of [`horizon_loss`] over samples sharing one head shape.
pub fn batch_horizon_loss(
    samples: &[(ForecastHead, TargetBundle)],
    levels: &QuantileLevels,
) -> Result<f64, ScoringError> {
    if samples.is_empty() {
        return Err(ScoringError::Shape("batch is empty".into()));
    }
    let mut total = 0.0;
    for (head, targets) in samples {
        total += horizon_loss(head, targets, levels)?;
    }
    Ok(total / samples.len() as f64)
}

/// ℒ_q for one sample: normalize raw targets with the history statistics,
/// obtain the scorer's forecast, and average the per-head losses.
pub fn full_objective(
    scorer: &dyn Scorer,
    history: &[f64],
    description: &str,
    raw_targets: &[Vec<f64>],
    horizons: &[usize],
    levels: &QuantileLevels,
) -> Result<f64, ScoringError> {
    if raw_targets.len() != horizons.len() {
        return Err(ScoringError::Shape(format!(
            "{} target blocks for {} horizons",
            raw_targets.len(),
            horizons.len()
        )));
    }
    for (block, &h) in raw_targets.iter().zip(horizons) {
        if block.len() != h {
            return Err(ScoringError::Shape(format!(
                "target block of {} values for horizon {h}",
                block.len()
            )));
        }
    }
    let norm = NormStats::from_history(history)?;
    let forecast = scorer.forecast(history, description, horizons, levels)?;
    if forecast.heads().len() != horizons.len() {
        return Err(ScoringError::Shape(format!(
            "scorer returned {} heads for {} horizons",
            forecast.heads().len(),
            horizons.len()
        )));
    }
    let mut total = 0.0;
    for ((head, block), &h) in forecast.heads().iter().zip(raw_targets).zip(horizons) {
        if head.horizon != h {
            return Err(ScoringError::Shape(format!(
                "scorer returned a horizon-{} head where {h} was requested",
                head.horizon
            )));
        }
        let bundle = TargetBundle::from_values(norm.normalize(block));
        total += horizon_loss(head, &bundle, levels)?;
    }
    Ok(total / horizons.len() as f64)
}

/// Reward-side convenience: S = −ℒ_q.
pub fn score(
    scorer: &dyn Scorer,
    history: &[f64],
    description: &str,
    raw_targets: &[Vec<f64>],
    horizons: &[usize],
    levels: &QuantileLevels,
) -> Result<f64, ScoringError> {
    Ok(-full_objective(scorer, history, description, raw_targets, horizons, levels)?)
}
