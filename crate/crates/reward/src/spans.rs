//! Mapping turn advantages onto assistant token spans.
//!
//! The trainer optimizes only the tokens the policy generated. Each
//! assistant turn's completion token count comes from the gateway's usage
//! report, recorded on the trajectory during the rollout; spans are laid
//! out back to back over those counts, so span `i` covers the tokens of
//! assistant turn `i` and nothing else.

use morphocast_runtime::Trajectory;
use serde::{Deserialize, Serialize};

use crate::error::RewardError;

/// One labeled token range: turn `turn` (1-based) generated the tokens
/// `[start, end)` of the concatenated assistant output and carries this
/// advantage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenSpan {
    pub turn: usize,
    pub start: u64,
    pub end: u64,
    pub advantage: f64,
}

/// Labels each assistant turn's token span with its advantage.
///
/// Tool, user, and system content never appears: the spans index into the
/// assistant-generated token stream only. Fails with MISSING_TOKENIZATION
/// when any turn lacks a recorded completion token count.
pub fn attach_token_advantages(
    trajectory: &Trajectory,
    advantages: &[f64],
) -> Result<Vec<TokenSpan>, RewardError> {
    let turns = trajectory.turn_count();
    if advantages.len() != turns {
        return Err(RewardError::BadInput(format!(
            "trajectory {} has {} turns but {} advantages",
            trajectory.sample_id,
            turns,
            advantages.len()
        )));
    }
    let counts = &trajectory.stats.turn_completion_tokens;
    if counts.len() != turns {
        return Err(RewardError::BadInput(format!(
            "trajectory {} records {} per-turn token counts for {} turns",
            trajectory.sample_id,
            counts.len(),
            turns
        )));
    }

    let mut spans = Vec::with_capacity(turns);
    let mut offset = 0u64;
    for (index, (count, advantage)) in counts.iter().zip(advantages).enumerate() {
        let tokens = count.ok_or_else(|| {
            RewardError::MissingTokenization(format!(
                "trajectory {}: turn {} has no completion token count",
                trajectory.sample_id,
                index + 1
            ))
        })?;
        spans.push(TokenSpan {
            turn: index + 1,
            start: offset,
            end: offset + tokens,
            advantage: *advantage,
        });
        offset += tokens;
    }
    Ok(spans)
}
