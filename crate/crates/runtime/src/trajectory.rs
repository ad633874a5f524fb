//! Completed rollout conversations and their JSONL persistence.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use morphocast_gateway::{ChatMessage, Role};
use serde::{Deserialize, Serialize};

use crate::RuntimeError;

/// Half-open message-index range `[start, end)` covering one assistant
/// turn together with the tool responses it triggered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnBoundary {
    pub start: usize,
    pub end: usize,
}

/// Call and token accounting for one rollout.
///
/// `turn_completion_tokens` has one entry per assistant turn; `None` when
/// the endpoint reported no usage for that turn. The token totals sum
/// whatever usage was reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct TrajectoryStats {
    pub tool_calls: usize,
    pub budget_rejected_calls: usize,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
    pub turn_completion_tokens: Vec<Option<u64>>,
}

/// One finished rollout: the full conversation, its turn structure, the
/// elicited per-turn morphology descriptions, and accounting.
///
/// `descriptions` is empty until [`elicit_turn_descriptions`] output is
/// attached; filled, it holds `turn_count() + 1` entries, the initial
/// no-tools description first and the final answer last.
///
/// [`elicit_turn_descriptions`]: crate::elicit_turn_descriptions
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub sample_id: String,
    pub messages: Vec<ChatMessage>,
    pub turn_boundaries: Vec<TurnBoundary>,
    pub descriptions: Vec<String>,
    pub stats: TrajectoryStats,
}

impl Trajectory {
    /// Number of assistant turns, the final answer included.
    pub fn turn_count(&self) -> usize {
        self.turn_boundaries.len()
    }

    /// The closing assistant message's text, if the trajectory ends with a
    /// non-tool-calling assistant message as required.
    pub fn final_answer(&self) -> Option<&str> {
        let last = self.messages.last()?;
        if last.role == Role::Assistant && last.calls().is_empty() {
            last.content.as_deref()
        } else {
            None
        }
    }
}

/// Writes one trajectory per line.
pub fn write_trajectories(path: &Path, trajectories: &[Trajectory]) -> Result<(), RuntimeError> {
    let mut out = BufWriter::new(File::create(path)?);
    for trajectory in trajectories {
        let line = serde_json::to_string(trajectory)
            .map_err(|err| RuntimeError::BadInput(format!("unserializable trajectory: {err}")))?;
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a trajectory JSONL file; blank lines are skipped.
pub fn read_trajectories(path: &Path) -> Result<Vec<Trajectory>, RuntimeError> {
    let reader = BufReader::new(File::open(path)?);
    let mut trajectories = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let trajectory = serde_json::from_str(&line)
            .map_err(|err| RuntimeError::MalformedTrajectory(index + 1, err.to_string()))?;
        trajectories.push(trajectory);
    }
    Ok(trajectories)
}
