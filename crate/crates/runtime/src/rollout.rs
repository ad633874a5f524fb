//! The multi-turn tool-calling loop and per-turn description elicitation.

use morphocast_gateway::{ChatClient, ChatMessage, CompletionRequest};
use morphocast_series::Series;
use morphocast_toolbox::{dispatch, export_tool_schemas};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{
    render_system_prompt, render_user_prompt, RuntimeError, SampleContext, Trajectory,
    TrajectoryStats, TurnBoundary,
};

/// Budgets and sampling settings for one rollout.
///
/// `require_broad_and_local` does not change the loop; the quality-control
/// stage reads it to demand at least one broad and one recent-local window
/// inspection per trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RolloutConfig {
    pub model: String,
    pub max_assistant_turns: usize,
    pub max_parallel_calls: usize,
    pub temperature: f64,
    pub seed: Option<u64>,
    pub max_tokens: Option<u64>,
    pub require_broad_and_local: bool,
}

impl Default for RolloutConfig {
    fn default() -> Self {
        RolloutConfig {
            model: "default".into(),
            max_assistant_turns: 8,
            max_parallel_calls: 3,
            temperature: 1.0,
            seed: None,
            max_tokens: None,
            require_broad_and_local: true,
        }
    }
}

impl RolloutConfig {
    pub fn validate(&self) -> Result<(), RuntimeError> {
        if self.max_assistant_turns < 1 {
            return Err(RuntimeError::BadInput(
                "max_assistant_turns must be >= 1".into(),
            ));
        }
        if self.max_parallel_calls < 1 {
            return Err(RuntimeError::BadInput(
                "max_parallel_calls must be >= 1".into(),
            ));
        }
        Ok(())
    }

    fn request(&self, messages: Vec<ChatMessage>, with_tools: bool) -> CompletionRequest {
        CompletionRequest {
            model: self.model.clone(),
            messages,
            tools: with_tools.then(export_tool_schemas),
            temperature: Some(self.temperature),
            max_tokens: self.max_tokens,
            seed: self.seed,
        }
    }
}

/// Drives one sample to a final answer.
///
/// Each turn sends the conversation with the tool schemas attached; tool
/// calls are executed against the sample's history window, their
/// observations (including tool errors) appended as tool messages. Calls
/// past `max_parallel_calls` in a single turn are answered with a
/// `BUDGET_EXCEEDED` error observation instead of being executed. The last
/// permitted turn withholds the tool schemas so the model must answer.
pub fn run_rollout(
    sample: &SampleContext,
    client: &dyn ChatClient,
    config: &RolloutConfig,
) -> Result<Trajectory, RuntimeError> {
    config.validate()?;
    sample.validate()?;
    let series = Series::new(sample.history.clone())
        .map_err(|err| RuntimeError::BadInput(err.to_string()))?;

    let mut messages = vec![
        ChatMessage::system(render_system_prompt(config)),
        ChatMessage::user(render_user_prompt(sample)),
    ];
    let mut turn_boundaries = Vec::new();
    let mut stats = TrajectoryStats::default();
    let mut reached_final = false;

    for turn in 1..=config.max_assistant_turns {
        let with_tools = turn < config.max_assistant_turns;
        let request = config.request(messages.clone(), with_tools);
        let response = client.complete(&request)?;

        stats
            .turn_completion_tokens
            .push(response.usage.map(|u| u.completion_tokens));
        if let Some(usage) = response.usage {
            stats.prompt_tokens += usage.prompt_tokens;
            stats.completion_tokens += usage.completion_tokens;
            stats.total_tokens += usage.total_tokens;
        }

        let start = messages.len();
        let message = response.message;
        let calls = message.calls().to_vec();
        messages.push(message);

        if calls.is_empty() {
            turn_boundaries.push(TurnBoundary { start, end: messages.len() });
            let text = messages
                .last()
                .and_then(|m| m.content.as_deref())
                .unwrap_or_default();
            if text.trim().is_empty() {
                return Err(RuntimeError::EmptyFinal);
            }
            reached_final = true;
            break;
        }
        if !with_tools {
            return Err(RuntimeError::EmptyFinal);
        }

        for (index, call) in calls.iter().enumerate() {
            let observation = if index < config.max_parallel_calls {
                stats.tool_calls += 1;
                match call.parsed_arguments() {
                    Ok(arguments) => dispatch(&series, &call.function.name, &arguments),
                    Err(_) => json!({"error": {
                        "code": "BAD_PARAM",
                        "message": "tool arguments are not valid JSON",
                    }}),
                }
            } else {
                stats.budget_rejected_calls += 1;
                json!({"error": {
                    "code": "BUDGET_EXCEEDED",
                    "message": format!(
                        "at most {} tool calls are executed per reply; call {} of {} dropped",
                        config.max_parallel_calls,
                        index + 1,
                        calls.len(),
                    ),
                }})
            };
            messages.push(ChatMessage::tool(call.id.clone(), observation.to_string()));
        }
        turn_boundaries.push(TurnBoundary { start, end: messages.len() });
    }

    if !reached_final {
        return Err(RuntimeError::EmptyFinal);
    }
    Ok(Trajectory {
        sample_id: sample.sample_id.clone(),
        messages,
        turn_boundaries,
        descriptions: Vec::new(),
        stats,
    })
}

/// Collects the morphology description the model would give before each
/// turn's evidence arrived.
///
/// Index 0 is elicited from the system and user messages alone; index `i`
/// from the prefix ending with turn `i`'s observations. All elicitations
/// run without tool schemas. The last entry is the trajectory's own final
/// answer, so a trajectory with `N` turns yields `N + 1` descriptions.
pub fn elicit_turn_descriptions(
    trajectory: &Trajectory,
    client: &dyn ChatClient,
    config: &RolloutConfig,
) -> Result<Vec<String>, RuntimeError> {
    let turns = trajectory.turn_boundaries.len();
    if turns == 0 || trajectory.messages.len() < 2 {
        return Err(RuntimeError::BadInput(format!(
            "trajectory {} has no turns to describe",
            trajectory.sample_id
        )));
    }
    let final_answer = trajectory.final_answer().ok_or_else(|| {
        RuntimeError::BadInput(format!(
            "trajectory {} does not end in a final answer",
            trajectory.sample_id
        ))
    })?;

    let mut prefix_ends = vec![2];
    for boundary in &trajectory.turn_boundaries[..turns - 1] {
        prefix_ends.push(boundary.end);
    }

    let mut descriptions = Vec::with_capacity(turns + 1);
    for end in prefix_ends {
        let request = config.request(trajectory.messages[..end].to_vec(), false);
        let response = client.complete(&request)?;
        descriptions.push(response.message.content.unwrap_or_default());
    }
    descriptions.push(final_answer.to_string());
    Ok(descriptions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_matches_the_stated_budgets() {
        let config = RolloutConfig::default();
        assert_eq!(config.max_assistant_turns, 8);
        assert_eq!(config.max_parallel_calls, 3);
        assert!(config.require_broad_and_local);
    }

    #[test]
    fn zero_budgets_are_rejected() {
        let mut config = RolloutConfig::default();
        config.max_assistant_turns = 0;
        assert_eq!(config.validate().unwrap_err().code(), "BAD_INPUT");
        let mut config = RolloutConfig::default();
        config.max_parallel_calls = 0;
        assert_eq!(config.validate().unwrap_err().code(), "BAD_INPUT");
    }

    #[test]
    fn partial_config_files_fill_in_defaults() {
        let config: RolloutConfig =
            serde_json::from_str(r#"{"max_assistant_turns": 4}"#).unwrap();
        assert_eq!(config.max_assistant_turns, 4);
        assert_eq!(config.max_parallel_calls, 3);
    }
}
