//! RL batch assembly and JSONL export.
//!
//! One record per trajectory: the full message transcript, the labeled
//! assistant token spans, and the raw credit series, all under the group id
//! that ties competing rollouts of one prompt together.

use std::io::{BufRead, BufReader, Write};

use morphocast_gateway::ChatMessage;
use morphocast_runtime::Trajectory;
use serde::{Deserialize, Serialize};

use crate::credit::TurnCredit;
use crate::error::RewardError;
use crate::group::GroupBatch;
use crate::spans::{attach_token_advantages, TokenSpan};

/// One trainer-ready trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RlRecord {
    pub group_id: String,
    pub sample_id: String,
    pub messages: Vec<ChatMessage>,
    pub spans: Vec<TokenSpan>,
    pub scores: Vec<f64>,
    pub returns: Vec<f64>,
    pub gamma: f64,
}

/// Builds one record per trajectory from a normalized group.
///
/// `trajectories` and `batch.credits` must be parallel (same order, same
/// length) and the batch must already carry advantages.
pub fn build_rl_records(
    trajectories: &[Trajectory],
    batch: &GroupBatch,
) -> Result<Vec<RlRecord>, RewardError> {
    if trajectories.len() != batch.credits.len() {
        return Err(RewardError::BadInput(format!(
            "group {}: {} trajectories for {} credit entries",
            batch.group_id,
            trajectories.len(),
            batch.credits.len()
        )));
    }
    trajectories
        .iter()
        .zip(&batch.credits)
        .map(|(trajectory, credit)| build_record(&batch.group_id, trajectory, credit))
        .collect()
}

fn build_record(
    group_id: &str,
    trajectory: &Trajectory,
    credit: &TurnCredit,
) -> Result<RlRecord, RewardError> {
    if credit.advantages.len() != credit.returns.len() {
        return Err(RewardError::BadInput(format!(
            "group {group_id}: trajectory {} has no advantages; normalize the group first",
            trajectory.sample_id
        )));
    }
    let spans = attach_token_advantages(trajectory, &credit.advantages)?;
    Ok(RlRecord {
        group_id: group_id.to_string(),
        sample_id: trajectory.sample_id.clone(),
        messages: trajectory.messages.clone(),
        spans,
        scores: credit.scores.clone(),
        returns: credit.returns.clone(),
        gamma: credit.gamma,
    })
}

/// Writes records as JSONL, one trajectory per line.
pub fn write_rl_batch(writer: &mut dyn Write, records: &[RlRecord]) -> Result<(), RewardError> {
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|err| RewardError::BadInput(format!("unserializable record: {err}")))?;
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

/// Reads JSONL records; blank lines are skipped, errors name the line.
pub fn read_rl_batch(reader: impl std::io::Read) -> Result<Vec<RlRecord>, RewardError> {
    let mut records = Vec::new();
    for (number, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RlRecord = serde_json::from_str(&line).map_err(|err| {
            RewardError::BadInput(format!("rl batch line {}: {err}", number + 1))
        })?;
        records.push(record);
    }
    Ok(records)
}
