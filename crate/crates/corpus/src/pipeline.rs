//! The end-to-end corpus loop: rollout, judge checks, retries, accounting.
//!
//! Each sample is rolled out, described, and judged. A sample that fails a
//! judge check is regenerated from scratch and re-judged, up to three
//! retries; a sample still failing after four attempts is discarded. One
//! sample's failure (including transport errors) never aborts the batch:
//! the outcome is recorded and the loop moves on.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};

use morphocast_gateway::ChatClient;
use morphocast_runtime::{elicit_turn_descriptions, run_rollout, RolloutConfig, Trajectory};
use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::manifest::CorpusSample;
use crate::qc::{run_qc, JudgeSettings, QcVerdict};

/// Regenerations allowed after the first failed attempt.
pub const QC_MAX_RETRIES: usize = 3;

/// All verdicts from one attempt at one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QcRecord {
    pub sample_id: String,
    pub dataset: String,
    /// Zero-based attempt index; attempt 0 is the original generation.
    pub attempt: usize,
    /// True when all three checks passed on this attempt.
    pub passed: bool,
    pub verdicts: Vec<QcVerdict>,
}

/// Final outcome for one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub sample_id: String,
    pub dataset: String,
    pub accepted: bool,
    /// Retries consumed: 0 when the first attempt passed, up to
    /// [`QC_MAX_RETRIES`] when the sample was discarded.
    pub retries: usize,
    /// Error code when the sample aborted outside the judge checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Accepted/discarded accounting for one dataset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetCounts {
    pub dataset: String,
    /// Windows that entered the pipeline.
    pub generated: usize,
    pub accepted: usize,
    /// Samples that needed at least one regeneration.
    pub retried: usize,
    pub discarded: usize,
}

/// Whole-run accounting; `generated = accepted + discarded` per dataset and
/// in total.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub datasets: Vec<DatasetCounts>,
    pub generated: usize,
    pub accepted: usize,
    pub retried: usize,
    pub discarded: usize,
}

/// Everything the pipeline produced.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    /// Accepted trajectories in input sample order, descriptions attached.
    pub trajectories: Vec<Trajectory>,
    /// One record per attempt, in execution order.
    pub records: Vec<QcRecord>,
    /// One report per input sample, in input order.
    pub samples: Vec<SampleReport>,
    pub report: PipelineReport,
}

/// Runs rollout, description elicitation, and QC over every sample.
///
/// When `initial` is given it must hold exactly one trajectory per sample
/// (matched by sample id); those are judged as attempt 0 so a separate
/// rollout stage's output can be QC'd without regenerating it. Retries
/// always regenerate: a fresh rollout against `agent`, fresh descriptions,
/// then the judges again.
pub fn pipeline_run(
    samples: &[CorpusSample],
    initial: Option<&[Trajectory]>,
    agent: &dyn ChatClient,
    judge: &dyn ChatClient,
    rollout: &RolloutConfig,
    judge_settings: &JudgeSettings,
) -> Result<PipelineOutcome, CorpusError> {
    let initial_by_id = match initial {
        None => HashMap::new(),
        Some(trajectories) => {
            let mut by_id = HashMap::with_capacity(trajectories.len());
            for trajectory in trajectories {
                if by_id.insert(trajectory.sample_id.as_str(), trajectory).is_some() {
                    return Err(CorpusError::BadInput(format!(
                        "duplicate trajectory for sample {}",
                        trajectory.sample_id
                    )));
                }
            }
            for sample in samples {
                if !by_id.contains_key(sample.context.sample_id.as_str()) {
                    return Err(CorpusError::BadInput(format!(
                        "no trajectory for sample {}",
                        sample.context.sample_id
                    )));
                }
            }
            by_id
        }
    };

    let mut outcome = PipelineOutcome {
        trajectories: Vec::new(),
        records: Vec::new(),
        samples: Vec::new(),
        report: PipelineReport::default(),
    };

    for sample in samples {
        let sample_id = sample.context.sample_id.clone();
        let mut accepted = false;
        let mut retries = 0;
        let mut error = None;

        for attempt in 0..=QC_MAX_RETRIES {
            retries = attempt;
            let attempt_result = run_attempt(
                sample,
                attempt,
                initial_by_id.get(sample_id.as_str()).copied(),
                agent,
                judge,
                rollout,
                judge_settings,
            );
            let (trajectory, verdicts) = match attempt_result {
                Ok(pair) => pair,
                Err(err) => {
                    error = Some(err.code().to_string());
                    break;
                }
            };
            let passed = verdicts.len() == 3 && verdicts.iter().all(|v| v.pass);
            outcome.records.push(QcRecord {
                sample_id: sample_id.clone(),
                dataset: sample.dataset.clone(),
                attempt,
                passed,
                verdicts,
            });
            if passed {
                outcome.trajectories.push(trajectory);
                accepted = true;
                break;
            }
        }

        outcome.samples.push(SampleReport {
            sample_id,
            dataset: sample.dataset.clone(),
            accepted,
            retries,
            error,
        });
    }

    outcome.report = tally(&outcome.samples);
    Ok(outcome)
}

fn run_attempt(
    sample: &CorpusSample,
    attempt: usize,
    initial: Option<&Trajectory>,
    agent: &dyn ChatClient,
    judge: &dyn ChatClient,
    rollout: &RolloutConfig,
    judge_settings: &JudgeSettings,
) -> Result<(Trajectory, Vec<QcVerdict>), CorpusError> {
    let trajectory = match (attempt, initial) {
        (0, Some(provided)) => provided.clone(),
        _ => {
            let mut generated = run_rollout(&sample.context, agent, rollout)?;
            generated.descriptions = elicit_turn_descriptions(&generated, agent, rollout)?;
            generated
        }
    };
    let verdicts = run_qc(
        &trajectory,
        judge,
        judge_settings,
        &sample.future_short,
        &sample.future_long,
        attempt,
    )?;
    Ok((trajectory, verdicts))
}

fn tally(samples: &[SampleReport]) -> PipelineReport {
    let mut report = PipelineReport::default();
    for sample in samples {
        let counts = match report
            .datasets
            .iter_mut()
            .find(|c| c.dataset == sample.dataset)
        {
            Some(counts) => counts,
            None => {
                report.datasets.push(DatasetCounts {
                    dataset: sample.dataset.clone(),
                    ..DatasetCounts::default()
                });
                report.datasets.last_mut().unwrap()
            }
        };
        counts.generated += 1;
        report.generated += 1;
        if sample.accepted {
            counts.accepted += 1;
            report.accepted += 1;
        } else {
            counts.discarded += 1;
            report.discarded += 1;
        }
        if sample.retries > 0 {
            counts.retried += 1;
            report.retried += 1;
        }
    }
    report
}

/// Writes QC records as JSONL, one attempt per line.
pub fn write_qc_records(writer: &mut dyn Write, records: &[QcRecord]) -> Result<(), CorpusError> {
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|err| CorpusError::Malformed(format!("qc record encode: {err}")))?;
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

/// Reads JSONL QC records; blank lines are skipped, errors name the line.
pub fn read_qc_records(reader: impl std::io::Read) -> Result<Vec<QcRecord>, CorpusError> {
    let mut records = Vec::new();
    for (number, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: QcRecord = serde_json::from_str(&line).map_err(|err| {
            CorpusError::Malformed(format!("qc record line {}: {err}", number + 1))
        })?;
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use morphocast_gateway::{
        ChatMessage, CompletionResponse, FinishReason, ScriptedClient, Usage,
    };
    use morphocast_runtime::SampleContext;
    use morphocast_series::Metadata;
    use serde_json::json;

    use crate::windowing::{WindowKind, WindowSpec};

    fn sample(id: &str, dataset: &str) -> CorpusSample {
        let mut metadata = Metadata::unavailable();
        metadata.dataset = dataset.to_string();
        CorpusSample {
            dataset: dataset.to_string(),
            spec: WindowSpec {
                series_id: format!("{dataset}-s"),
                hist_start: 0,
                hist_len: 6,
                future_short_start: 6,
                future_short_len: 1,
                future_long_start: 6,
                future_long_len: 2,
                kind: WindowKind::MaxLength,
            },
            context: SampleContext::new(
                id,
                vec![1.0, 2.0, 1.0, 2.0, 1.0, 2.0],
                1,
                2,
                metadata,
                false,
            )
            .unwrap(),
            future_short: vec![1.0],
            future_long: vec![1.0, 2.0],
        }
    }

    fn text_response(text: &str) -> CompletionResponse {
        CompletionResponse {
            message: ChatMessage::assistant(text),
            finish_reason: FinishReason::Stop,
            usage: Some(Usage {
                prompt_tokens: 20,
                completion_tokens: 10,
                total_tokens: 30,
            }),
        }
    }

    fn verdict(pass: bool, evidence: &str) -> CompletionResponse {
        text_response(&serde_json::to_string(&json!({"pass": pass, "evidence": evidence})).unwrap())
    }

    /// One generation = one rollout completion (an immediate final answer)
    /// plus one description completion for the lone prefix.
    fn generation(tag: &str) -> Vec<CompletionResponse> {
        vec![
            text_response(&format!("final {tag}")),
            text_response(&format!("description {tag}")),
        ]
    }

    fn config() -> RolloutConfig {
        let mut config = RolloutConfig::default();
        config.model = "agent-model".to_string();
        config.temperature = 0.0;
        config
    }

    fn passes() -> Vec<CompletionResponse> {
        vec![
            verdict(true, "no leak"),
            verdict(true, "grounded"),
            verdict(true, "plausible"),
        ]
    }

    fn assert_report_sums(report: &PipelineReport) {
        assert_eq!(report.generated, report.accepted + report.discarded);
        for counts in &report.datasets {
            assert_eq!(counts.generated, counts.accepted + counts.discarded);
        }
        assert_eq!(
            report.generated,
            report.datasets.iter().map(|c| c.generated).sum::<usize>()
        );
    }

    #[test]
    fn all_pass_run_accepts_everything() {
        let samples = vec![sample("w0000", "grid"), sample("w0001", "web")];
        let agent = ScriptedClient::new([generation("a"), generation("b")].concat());
        let judge = ScriptedClient::new([passes(), passes()].concat());

        let outcome = pipeline_run(
            &samples,
            None,
            &agent,
            &judge,
            &config(),
            &JudgeSettings::default(),
        )
        .unwrap();

        assert_eq!(outcome.trajectories.len(), 2);
        assert_eq!(outcome.trajectories[0].sample_id, "w0000");
        assert_eq!(
            outcome.trajectories[0].descriptions,
            vec!["description a".to_string(), "final a".to_string()]
        );
        assert_eq!(outcome.records.len(), 2);
        assert!(outcome.records.iter().all(|r| r.passed && r.attempt == 0));
        assert_eq!(outcome.report.accepted, 2);
        assert_eq!(outcome.report.discarded, 0);
        assert_eq!(outcome.report.retried, 0);
        assert_eq!(outcome.report.datasets.len(), 2);
        assert_report_sums(&outcome.report);
        assert_eq!(agent.remaining(), 0);
        assert_eq!(judge.remaining(), 0);
    }

    #[test]
    fn failed_checks_trigger_full_regeneration() {
        let samples = vec![sample("w0000", "grid")];
        let agent = ScriptedClient::new([generation("first"), generation("second")].concat());
        let judge = ScriptedClient::new(
            [vec![verdict(false, "leaks the dataset name")], passes()].concat(),
        );

        let outcome = pipeline_run(
            &samples,
            None,
            &agent,
            &judge,
            &config(),
            &JudgeSettings::default(),
        )
        .unwrap();

        assert_eq!(outcome.trajectories.len(), 1);
        assert_eq!(
            outcome.trajectories[0].final_answer(),
            Some("final second")
        );
        assert_eq!(outcome.records.len(), 2);
        assert!(!outcome.records[0].passed);
        assert_eq!(outcome.records[0].attempt, 0);
        assert_eq!(outcome.records[0].verdicts.len(), 1);
        assert!(outcome.records[1].passed);
        assert_eq!(outcome.records[1].attempt, 1);
        assert_eq!(outcome.samples[0].retries, 1);
        assert!(outcome.samples[0].accepted);
        assert_eq!(outcome.report.retried, 1);
        assert_report_sums(&outcome.report);
        assert_eq!(agent.remaining(), 0);
        assert_eq!(judge.remaining(), 0);
    }

    #[test]
    fn four_failures_discard_the_sample_with_three_retries() {
        let samples = vec![sample("w0000", "grid")];
        let agent = ScriptedClient::new(
            [
                generation("a"),
                generation("b"),
                generation("c"),
                generation("d"),
            ]
            .concat(),
        );
        let judge = ScriptedClient::new(vec![
            verdict(false, "bad"),
            verdict(false, "bad"),
            verdict(false, "bad"),
            verdict(false, "bad"),
        ]);

        let outcome = pipeline_run(
            &samples,
            None,
            &agent,
            &judge,
            &config(),
            &JudgeSettings::default(),
        )
        .unwrap();

        assert!(outcome.trajectories.is_empty());
        assert_eq!(outcome.records.len(), 4);
        assert_eq!(
            outcome.records.iter().map(|r| r.attempt).collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
        assert!(!outcome.samples[0].accepted);
        assert_eq!(outcome.samples[0].retries, QC_MAX_RETRIES);
        assert_eq!(outcome.report.discarded, 1);
        assert_eq!(outcome.report.accepted, 0);
        assert_report_sums(&outcome.report);
        assert_eq!(agent.remaining(), 0);
    }

    #[test]
    fn provided_trajectories_are_judged_without_regeneration() {
        let samples = vec![sample("w0000", "grid")];
        let staging_agent = ScriptedClient::new(generation("staged"));
        let mut staged = run_rollout(&samples[0].context, &staging_agent, &config()).unwrap();
        staged.descriptions =
            elicit_turn_descriptions(&staged, &staging_agent, &config()).unwrap();

        let agent = ScriptedClient::new(vec![]);
        let judge = ScriptedClient::new(passes());
        let outcome = pipeline_run(
            &samples,
            Some(std::slice::from_ref(&staged)),
            &agent,
            &judge,
            &config(),
            &JudgeSettings::default(),
        )
        .unwrap();

        assert_eq!(agent.requests().len(), 0);
        assert_eq!(outcome.trajectories.len(), 1);
        assert_eq!(outcome.trajectories[0].final_answer(), Some("final staged"));
        assert_report_sums(&outcome.report);
    }

    #[test]
    fn retries_regenerate_even_when_attempt_zero_was_provided() {
        let samples = vec![sample("w0000", "grid")];
        let staging_agent = ScriptedClient::new(generation("staged"));
        let mut staged = run_rollout(&samples[0].context, &staging_agent, &config()).unwrap();
        staged.descriptions =
            elicit_turn_descriptions(&staged, &staging_agent, &config()).unwrap();

        let agent = ScriptedClient::new(generation("retry"));
        let judge = ScriptedClient::new([vec![verdict(false, "stale")], passes()].concat());
        let outcome = pipeline_run(
            &samples,
            Some(std::slice::from_ref(&staged)),
            &agent,
            &judge,
            &config(),
            &JudgeSettings::default(),
        )
        .unwrap();

        assert_eq!(outcome.trajectories[0].final_answer(), Some("final retry"));
        assert_eq!(outcome.samples[0].retries, 1);
        assert_eq!(agent.remaining(), 0);
    }

    #[test]
    fn missing_or_duplicate_provided_trajectories_are_rejected() {
        let samples = vec![sample("w0000", "grid")];
        let agent = ScriptedClient::new(vec![]);
        let judge = ScriptedClient::new(vec![]);

        let err = pipeline_run(
            &samples,
            Some(&[]),
            &agent,
            &judge,
            &config(),
            &JudgeSettings::default(),
        )
        .unwrap_err();
        assert_eq!(err.code(), "BAD_INPUT");

        let staging_agent = ScriptedClient::new(generation("staged"));
        let staged = run_rollout(&samples[0].context, &staging_agent, &config()).unwrap();
        let twice = vec![staged.clone(), staged];
        let err = pipeline_run(
            &samples,
            Some(&twice),
            &agent,
            &judge,
            &config(),
            &JudgeSettings::default(),
        )
        .unwrap_err();
        assert_eq!(err.code(), "BAD_INPUT");
    }

    #[test]
    fn one_failing_sample_does_not_abort_the_batch() {
        let samples = vec![sample("w0000", "grid"), sample("w0001", "grid")];
        // Only the first sample's generation is scripted; the second hits an
        // exhausted agent and must be recorded as an error, not a panic.
        let agent = ScriptedClient::new(generation("only"));
        let judge = ScriptedClient::new(passes());

        let outcome = pipeline_run(
            &samples,
            None,
            &agent,
            &judge,
            &config(),
            &JudgeSettings::default(),
        )
        .unwrap();

        assert!(outcome.samples[0].accepted);
        assert!(!outcome.samples[1].accepted);
        assert_eq!(outcome.samples[1].error.as_deref(), Some("GATEWAY"));
        assert_eq!(outcome.trajectories.len(), 1);
        assert_eq!(outcome.report.accepted, 1);
        assert_eq!(outcome.report.discarded, 1);
        assert_report_sums(&outcome.report);
    }

    #[test]
    fn qc_records_round_trip_through_jsonl() {
        let records = vec![QcRecord {
            sample_id: "w0000".to_string(),
            dataset: "grid".to_string(),
            attempt: 1,
            passed: false,
            verdicts: vec![QcVerdict {
                check: crate::qc::QcCheck::MetadataLeak,
                pass: false,
                evidence: "names the city".to_string(),
                attempt: 1,
            }],
        }];
        let mut buffer = Vec::new();
        write_qc_records(&mut buffer, &records).unwrap();
        let text = String::from_utf8(buffer.clone()).unwrap();
        assert_eq!(text.lines().count(), 1);
        let back = read_qc_records(buffer.as_slice()).unwrap();
        assert_eq!(back, records);

        let err = read_qc_records("{oops\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }
}
