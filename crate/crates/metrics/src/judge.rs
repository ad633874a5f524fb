//! Reasoning-accuracy check: an LLM judge reads each final forecast next to
//! the realized futures and votes pass or fail.

use morphocast_gateway::{ChatClient, ChatMessage, CompletionRequest};
use morphocast_runtime::render_accuracy_judge_prompt;
use morphocast_series::format_values;
use serde::Deserialize;

use crate::error::MetricsError;

/// Longest evidence string a judge may return, in whitespace-split words.
/// Matches the corpus QC limit so both judge surfaces enforce one contract.
pub const JUDGE_EVIDENCE_WORD_LIMIT: usize = 60;

/// Model settings for judge calls.
#[derive(Debug, Clone, PartialEq)]
pub struct JudgeOptions {
    pub model: String,
    pub temperature: f64,
    pub max_tokens: Option<u64>,
    pub seed: Option<u64>,
}

impl Default for JudgeOptions {
    fn default() -> Self {
        JudgeOptions {
            model: "default".to_string(),
            temperature: 0.0,
            max_tokens: None,
            seed: None,
        }
    }
}

/// Outcome of judging a test set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JudgeAccuracy {
    /// Pass fraction; malformed verdicts count as failures.
    pub accuracy: f64,
    pub passed: usize,
    pub total: usize,
    /// How many verdicts failed because the judge's reply did not parse.
    pub malformed: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerdict {
    pass: bool,
    evidence: String,
}

fn parse_verdict(content: Option<&str>) -> (bool, bool) {
    let Some(text) = content else {
        return (false, true);
    };
    let Ok(raw) = serde_json::from_str::<RawVerdict>(text.trim()) else {
        return (false, true);
    };
    if raw.evidence.split_whitespace().count() > JUDGE_EVIDENCE_WORD_LIMIT {
        return (false, true);
    }
    (raw.pass, false)
}

/// Judges every forecast text against its realized short and long futures
/// with default model settings.
pub fn judge_accuracy(
    descriptions: &[String],
    futures: &[(Vec<f64>, Vec<f64>)],
    judge: &dyn ChatClient,
) -> Result<JudgeAccuracy, MetricsError> {
    judge_accuracy_with(descriptions, futures, judge, &JudgeOptions::default())
}

pub fn judge_accuracy_with(
    descriptions: &[String],
    futures: &[(Vec<f64>, Vec<f64>)],
    judge: &dyn ChatClient,
    options: &JudgeOptions,
) -> Result<JudgeAccuracy, MetricsError> {
    if descriptions.len() != futures.len() {
        return Err(MetricsError::BadInput(format!(
            "{} forecasts but {} future blocks",
            descriptions.len(),
            futures.len()
        )));
    }
    if descriptions.is_empty() {
        return Err(MetricsError::BadInput(
            "no forecasts to judge".to_string(),
        ));
    }

    let mut passed = 0usize;
    let mut malformed = 0usize;
    for (text, (short, long)) in descriptions.iter().zip(futures) {
        let prompt =
            render_accuracy_judge_prompt(text, &format_values(short), &format_values(long));
        let request = CompletionRequest {
            model: options.model.clone(),
            messages: vec![ChatMessage::user(&prompt)],
            tools: None,
            temperature: Some(options.temperature),
            max_tokens: options.max_tokens,
            seed: options.seed,
        };
        let response = judge.complete(&request)?;
        let (pass, bad) = parse_verdict(response.message.content.as_deref());
        if pass {
            passed += 1;
        }
        if bad {
            malformed += 1;
        }
    }

    Ok(JudgeAccuracy {
        accuracy: passed as f64 / descriptions.len() as f64,
        passed,
        total: descriptions.len(),
        malformed,
    })
}
