//! Group-normalized advantages.
//!
//! All returns from all trajectories in a group are pooled; each return's
//! advantage is its z-score under the pooled mean and population standard
//! deviation. Trajectories in one group answer the same prompt but may have
//! different turn counts, which is why the statistics pool over every
//! return rather than pairing turns by index.

use serde::{Deserialize, Serialize};

use crate::credit::TurnCredit;
use crate::error::RewardError;

/// Standard-deviation floor; an all-equal group normalizes to zero
/// advantages instead of dividing by zero.
pub const ADV_EPSILON: f64 = 1e-8;

/// The trajectories competing on one prompt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupBatch {
    pub group_id: String,
    pub credits: Vec<TurnCredit>,
}

impl GroupBatch {
    pub fn new(group_id: impl Into<String>, credits: Vec<TurnCredit>) -> Self {
        GroupBatch {
            group_id: group_id.into(),
            credits,
        }
    }

    /// Total returns across all member trajectories.
    pub fn pooled_len(&self) -> usize {
        self.credits.iter().map(|c| c.returns.len()).sum()
    }
}

/// Fills each member's advantages with `(R - mean) / std` over the pooled
/// returns. The standard deviation is the population one, floored at
/// [`ADV_EPSILON`].
pub fn group_normalize(batch: &mut GroupBatch) -> Result<(), RewardError> {
    let pooled: Vec<f64> = batch
        .credits
        .iter()
        .flat_map(|c| c.returns.iter().copied())
        .collect();
    if pooled.len() < 2 {
        return Err(RewardError::DegenerateGroup(format!(
            "group {} pools {} returns; need at least 2",
            batch.group_id,
            pooled.len()
        )));
    }

    let n = pooled.len() as f64;
    let mean = pooled.iter().sum::<f64>() / n;
    let variance = pooled.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
    let std = variance.sqrt().max(ADV_EPSILON);

    for credit in &mut batch.credits {
        credit.advantages = credit.returns.iter().map(|r| (r - mean) / std).collect();
    }
    Ok(())
}
