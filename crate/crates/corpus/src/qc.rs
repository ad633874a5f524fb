//! Judge-based quality control for finished trajectories.
//!
//! Three checks run in a fixed order, each as a single judge completion:
//! metadata leakage in the final text, grounding of the reasoning in the
//! tool evidence, and directional accuracy against the held-out futures.
//! The first failing check stops the sequence. A judge reply that is not
//! exactly the expected JSON verdict counts as a failure with the evidence
//! string `malformed`.

use morphocast_gateway::{
    ChatClient, ChatMessage, CompletionRequest, Role,
};
use morphocast_runtime::{
    render_accuracy_judge_prompt, render_leak_judge_prompt, render_usage_judge_prompt, Trajectory,
};
use morphocast_series::format_values;
use serde::{Deserialize, Serialize};

use crate::error::CorpusError;

/// The three checks, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QcCheck {
    MetadataLeak,
    ReasoningUsage,
    ForecastAccuracy,
}

/// Outcome of one check on one attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QcVerdict {
    pub check: QcCheck,
    pub pass: bool,
    pub evidence: String,
    /// Zero-based attempt index this verdict belongs to.
    pub attempt: usize,
}

/// Completion parameters for judge calls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JudgeSettings {
    pub model: String,
    pub temperature: f64,
    pub max_tokens: Option<u64>,
    pub seed: Option<u64>,
}

impl Default for JudgeSettings {
    fn default() -> Self {
        JudgeSettings {
            model: "default".to_string(),
            temperature: 0.0,
            max_tokens: None,
            seed: None,
        }
    }
}

/// Longest evidence string a judge may return, in whitespace-split words.
pub const EVIDENCE_WORD_LIMIT: usize = 60;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerdict {
    pass: bool,
    evidence: String,
}

/// Runs the three checks against a finished trajectory.
///
/// The metadata-leak and reasoning-usage judges see the user prompt the
/// agent saw (which is the masked variant when the sample was masked); the
/// usage judge additionally sees the whole conversation serialized as JSON;
/// the accuracy judge sees the held-out future values. Verdicts are stamped
/// with `attempt`. Returns the verdicts produced up to and including the
/// first failure.
pub fn run_qc(
    trajectory: &Trajectory,
    judge: &dyn ChatClient,
    settings: &JudgeSettings,
    future_short: &[f64],
    future_long: &[f64],
    attempt: usize,
) -> Result<Vec<QcVerdict>, CorpusError> {
    let final_text = trajectory.final_answer().ok_or_else(|| {
        CorpusError::BadInput(format!(
            "trajectory {} has no final answer to judge",
            trajectory.sample_id
        ))
    })?;
    let metadata_context = trajectory
        .messages
        .iter()
        .find(|m| m.role == Role::User)
        .and_then(|m| m.content.as_deref())
        .ok_or_else(|| {
            CorpusError::BadInput(format!(
                "trajectory {} has no user prompt",
                trajectory.sample_id
            ))
        })?;
    let conversation = serde_json::to_string(&trajectory.messages)
        .map_err(|err| CorpusError::Malformed(format!("conversation encode: {err}")))?;

    let prompts = [
        (
            QcCheck::MetadataLeak,
            render_leak_judge_prompt(final_text, metadata_context),
        ),
        (
            QcCheck::ReasoningUsage,
            render_usage_judge_prompt(metadata_context, &conversation),
        ),
        (
            QcCheck::ForecastAccuracy,
            render_accuracy_judge_prompt(
                final_text,
                &format_values(future_short),
                &format_values(future_long),
            ),
        ),
    ];

    let mut verdicts = Vec::new();
    for (check, prompt) in prompts {
        let (pass, evidence) = ask_judge(judge, settings, &prompt)?;
        let stop = !pass;
        verdicts.push(QcVerdict {
            check,
            pass,
            evidence,
            attempt,
        });
        if stop {
            break;
        }
    }
    Ok(verdicts)
}

fn ask_judge(
    judge: &dyn ChatClient,
    settings: &JudgeSettings,
    prompt: &str,
) -> Result<(bool, String), CorpusError> {
    let request = CompletionRequest {
        model: settings.model.clone(),
        messages: vec![ChatMessage::user(prompt)],
        tools: None,
        temperature: Some(settings.temperature),
        max_tokens: settings.max_tokens,
        seed: settings.seed,
    };
    let response = judge.complete(&request)?;
    Ok(parse_verdict(response.message.content.as_deref()))
}

/// Accepts only a bare JSON object with exactly the `pass` and `evidence`
/// fields and an in-limit evidence string; anything else is a failed check
/// with the evidence `malformed`.
fn parse_verdict(content: Option<&str>) -> (bool, String) {
    let malformed = || (false, "malformed".to_string());
    let Some(text) = content else {
        return malformed();
    };
    let Ok(raw) = serde_json::from_str::<RawVerdict>(text.trim()) else {
        return malformed();
    };
    if raw.evidence.split_whitespace().count() > EVIDENCE_WORD_LIMIT {
        return malformed();
    }
    (raw.pass, raw.evidence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use morphocast_gateway::{CompletionResponse, FinishReason, ScriptedClient, ToolCall, Usage};
    use morphocast_runtime::{Trajectory, TrajectoryStats, TurnBoundary};
    use serde_json::json;

    fn verdict_response(pass: bool, evidence: &str) -> CompletionResponse {
        let body = serde_json::to_string(&json!({"pass": pass, "evidence": evidence})).unwrap();
        text_response(&body)
    }

    fn text_response(text: &str) -> CompletionResponse {
        CompletionResponse {
            message: ChatMessage::assistant(text),
            finish_reason: FinishReason::Stop,
            usage: Some(Usage {
                prompt_tokens: 10,
                completion_tokens: 5,
                total_tokens: 15,
            }),
        }
    }

    fn final_text() -> String {
        "In the short term, the curve drifts higher. Peaks stay sharp. Noise stays small.\n\n\
         In the long term, the daily rhythm persists. Amplitude grows slowly. No regime break appears."
            .to_string()
    }

    fn trajectory() -> Trajectory {
        let call = ToolCall::function("call_0", "standard_deviation", &json!({"left": 0, "right": 4}));
        Trajectory {
            sample_id: "w0001".to_string(),
            messages: vec![
                ChatMessage::system("system prompt"),
                ChatMessage::user("History window:\n  - start_time: 2016-08-23"),
                ChatMessage::assistant_with_calls(None, vec![call]),
                ChatMessage::tool("call_0", "{\"value\": 1.0}"),
                ChatMessage::assistant(final_text()),
            ],
            turn_boundaries: vec![
                TurnBoundary { start: 2, end: 4 },
                TurnBoundary { start: 4, end: 5 },
            ],
            descriptions: vec![],
            stats: TrajectoryStats {
                tool_calls: 1,
                budget_rejected_calls: 0,
                prompt_tokens: 0,
                completion_tokens: 0,
                total_tokens: 0,
                turn_completion_tokens: vec![Some(3), Some(9)],
            },
        }
    }

    fn settings() -> JudgeSettings {
        JudgeSettings {
            model: "judge-model".to_string(),
            temperature: 0.0,
            max_tokens: Some(128),
            seed: None,
        }
    }

    #[test]
    fn three_passing_verdicts_in_order() {
        let judge = ScriptedClient::new(vec![
            verdict_response(true, "no leak"),
            verdict_response(true, "grounded"),
            verdict_response(true, "plausible"),
        ]);
        let verdicts =
            run_qc(&trajectory(), &judge, &settings(), &[5.0], &[5.0, 6.0], 0).unwrap();
        assert_eq!(verdicts.len(), 3);
        assert_eq!(
            verdicts.iter().map(|v| v.check).collect::<Vec<_>>(),
            vec![
                QcCheck::MetadataLeak,
                QcCheck::ReasoningUsage,
                QcCheck::ForecastAccuracy
            ]
        );
        assert!(verdicts.iter().all(|v| v.pass));
        assert!(verdicts.iter().all(|v| v.attempt == 0));
        assert_eq!(judge.remaining(), 0);
    }

    #[test]
    fn judge_requests_carry_the_rendered_prompts() {
        let judge = ScriptedClient::new(vec![
            verdict_response(true, "no leak"),
            verdict_response(true, "grounded"),
            verdict_response(true, "plausible"),
        ]);
        let trajectory = trajectory();
        run_qc(&trajectory, &judge, &settings(), &[5.0], &[5.0, 6.0], 0).unwrap();

        let requests = judge.requests();
        assert_eq!(requests.len(), 3);
        for request in &requests {
            assert_eq!(request.model, "judge-model");
            assert_eq!(request.temperature, Some(0.0));
            assert_eq!(request.max_tokens, Some(128));
            assert!(request.tools.is_none());
            assert_eq!(request.messages.len(), 1);
            assert_eq!(request.messages[0].role, Role::User);
        }

        let leak_prompt = requests[0].messages[0].content.as_deref().unwrap();
        // The final text and the user prompt land in the leak judge's slots
        // verbatim, timestamps included.
        assert!(leak_prompt.contains(&final_text()));
        assert!(leak_prompt.contains("2016-08-23"));

        let usage_prompt = requests[1].messages[0].content.as_deref().unwrap();
        let conversation = serde_json::to_string(&trajectory.messages).unwrap();
        assert!(usage_prompt.contains(&conversation));

        let accuracy_prompt = requests[2].messages[0].content.as_deref().unwrap();
        assert!(accuracy_prompt.contains(&final_text()));
        assert!(accuracy_prompt.contains("Short-term future values: 5"));
        assert!(accuracy_prompt.contains("Long-term future values: 5, 6"));
    }

    #[test]
    fn first_failure_short_circuits() {
        let judge = ScriptedClient::new(vec![
            verdict_response(false, "names the dataset"),
            verdict_response(true, "unreachable"),
            verdict_response(true, "unreachable"),
        ]);
        let verdicts =
            run_qc(&trajectory(), &judge, &settings(), &[5.0], &[5.0, 6.0], 2).unwrap();
        assert_eq!(verdicts.len(), 1);
        assert_eq!(verdicts[0].check, QcCheck::MetadataLeak);
        assert!(!verdicts[0].pass);
        assert_eq!(verdicts[0].evidence, "names the dataset");
        assert_eq!(verdicts[0].attempt, 2);
        assert_eq!(judge.remaining(), 2);
    }

    #[test]
    fn malformed_replies_fail_the_check() {
        let cases = vec![
            text_response("not json at all"),
            text_response("{\"pass\": true}"),
            text_response("{\"pass\": true, \"evidence\": \"ok\", \"extra\": 1}"),
            text_response("{\"pass\": \"yes\", \"evidence\": \"ok\"}"),
            text_response("```json\n{\"pass\": true, \"evidence\": \"ok\"}\n```"),
        ];
        for response in cases {
            let judge = ScriptedClient::new(vec![response]);
            let verdicts =
                run_qc(&trajectory(), &judge, &settings(), &[5.0], &[5.0, 6.0], 0).unwrap();
            assert_eq!(verdicts.len(), 1);
            assert!(!verdicts[0].pass);
            assert_eq!(verdicts[0].evidence, "malformed");
        }
    }

    #[test]
    fn overlong_evidence_is_malformed_but_sixty_words_pass() {
        let long = vec!["word"; 61].join(" ");
        let judge = ScriptedClient::new(vec![verdict_response(true, &long)]);
        let verdicts =
            run_qc(&trajectory(), &judge, &settings(), &[5.0], &[5.0, 6.0], 0).unwrap();
        assert!(!verdicts[0].pass);
        assert_eq!(verdicts[0].evidence, "malformed");

        let exactly = vec!["word"; 60].join(" ");
        let judge = ScriptedClient::new(vec![
            verdict_response(true, &exactly),
            verdict_response(true, "ok"),
            verdict_response(true, "ok"),
        ]);
        let verdicts =
            run_qc(&trajectory(), &judge, &settings(), &[5.0], &[5.0, 6.0], 0).unwrap();
        assert_eq!(verdicts.len(), 3);
        assert_eq!(verdicts[0].evidence, exactly);
    }

    #[test]
    fn whitespace_around_the_json_is_tolerated() {
        let judge = ScriptedClient::new(vec![
            text_response("  {\"pass\": true, \"evidence\": \"ok\"}\n"),
            verdict_response(true, "ok"),
            verdict_response(true, "ok"),
        ]);
        let verdicts =
            run_qc(&trajectory(), &judge, &settings(), &[5.0], &[5.0, 6.0], 0).unwrap();
        assert_eq!(verdicts.len(), 3);
        assert!(verdicts[0].pass);
    }

    #[test]
    fn unfinished_trajectories_are_rejected() {
        let mut unfinished = trajectory();
        unfinished.messages.pop();
        unfinished.turn_boundaries.pop();
        let judge = ScriptedClient::new(vec![]);
        let err = run_qc(&unfinished, &judge, &settings(), &[5.0], &[5.0, 6.0], 0).unwrap_err();
        assert_eq!(err.code(), "BAD_INPUT");
        assert_eq!(judge.requests().len(), 0);
    }

    #[test]
    fn judge_transport_failures_propagate() {
        let judge = ScriptedClient::new(vec![]);
        let err = run_qc(&trajectory(), &judge, &settings(), &[5.0], &[5.0, 6.0], 0).unwrap_err();
        assert_eq!(err.code(), "CASSETTE_MISMATCH");
    }

    #[test]
    fn verdicts_serialize_with_snake_case_checks() {
        let verdict = QcVerdict {
            check: QcCheck::ForecastAccuracy,
            pass: true,
            evidence: "ok".to_string(),
            attempt: 1,
        };
        let line = serde_json::to_string(&verdict).unwrap();
        assert!(line.contains("\"check\":\"forecast_accuracy\""));
        let back: QcVerdict = serde_json::from_str(&line).unwrap();
        assert_eq!(back, verdict);
    }
}
