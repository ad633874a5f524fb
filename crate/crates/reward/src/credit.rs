//! Per-turn scores, marginal deltas, and discounted returns.
//!
//! A trajectory with N assistant turns carries N+1 descriptions: the
//! metadata-only baseline before any tool evidence, then one description
//! after each turn. Scoring each description with the frozen forecaster
//! gives S^0..S^N; the credit for turn i is the marginal improvement
//! Δ^i = S^i − S^{i−1}, and the return R^i discounts the improvements from
//! turn i onward.

use morphocast_runtime::Trajectory;
use morphocast_scoring::{score, QuantileLevels, Scorer};
use serde::{Deserialize, Serialize};

use crate::error::RewardError;

/// Scores, deltas, returns, and (after normalization) advantages for one
/// trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnCredit {
    /// S^0..S^N: forecast score under each successive description.
    pub scores: Vec<f64>,
    /// Δ^1..Δ^N: per-turn marginal improvements.
    pub deltas: Vec<f64>,
    /// R^1..R^N: discounted future improvements.
    pub returns: Vec<f64>,
    pub gamma: f64,
    /// Â^1..Â^N: group-normalized returns; empty until normalization runs.
    pub advantages: Vec<f64>,
}

impl TurnCredit {
    /// Builds deltas and returns from raw scores.
    pub fn from_scores(scores: Vec<f64>, gamma: f64) -> Result<Self, RewardError> {
        let deltas = compute_deltas(&scores)?;
        let returns = compute_returns(&deltas, gamma)?;
        Ok(TurnCredit {
            scores,
            deltas,
            returns,
            gamma,
            advantages: Vec::new(),
        })
    }

    /// Number of credited turns, N.
    pub fn turn_count(&self) -> usize {
        self.deltas.len()
    }
}

/// Δ^i = S^i − S^{i−1} for i = 1..N.
pub fn compute_deltas(scores: &[f64]) -> Result<Vec<f64>, RewardError> {
    if scores.len() < 2 {
        return Err(RewardError::BadInput(format!(
            "need the baseline score plus at least one turn score, got {}",
            scores.len()
        )));
    }
    Ok(scores.windows(2).map(|pair| pair[1] - pair[0]).collect())
}

/// R^i = Σ_{j≥i} γ^{j−i} Δ^j by the backward recursion R^i = Δ^i + γ R^{i+1}.
pub fn compute_returns(deltas: &[f64], gamma: f64) -> Result<Vec<f64>, RewardError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(RewardError::BadParam(format!(
            "discount must lie in [0, 1], got {gamma}"
        )));
    }
    let mut returns = vec![0.0; deltas.len()];
    let mut tail = 0.0;
    for i in (0..deltas.len()).rev() {
        tail = deltas[i] + gamma * tail;
        returns[i] = tail;
    }
    Ok(returns)
}

/// Scores every description of a finished trajectory: S^i is the negated
/// quantile objective of the scorer's forecast conditioned on description
/// r^i, evaluated against the held-out futures.
///
/// `raw_targets` and `horizons` are the short and long future blocks in
/// order, exactly as [`morphocast_scoring::score`] expects them. A scorer
/// failure names the turn it happened on; the caller flags the trajectory
/// rather than patching the gap.
pub fn compute_scores(
    trajectory: &Trajectory,
    history: &[f64],
    raw_targets: &[Vec<f64>],
    horizons: &[usize],
    scorer: &dyn Scorer,
    levels: &QuantileLevels,
) -> Result<Vec<f64>, RewardError> {
    let expected = trajectory.turn_count() + 1;
    if trajectory.descriptions.len() != expected {
        return Err(RewardError::BadInput(format!(
            "trajectory {} has {} descriptions for {} turns; elicit descriptions first",
            trajectory.sample_id,
            trajectory.descriptions.len(),
            trajectory.turn_count()
        )));
    }
    trajectory
        .descriptions
        .iter()
        .enumerate()
        .map(|(turn, description)| {
            score(scorer, history, description, raw_targets, horizons, levels)
                .map_err(|source| RewardError::Scorer { turn, source })
        })
        .collect()
}
