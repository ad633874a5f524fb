//! Evaluation samples and their JSONL encoding.

use std::io::{BufRead, BufReader, Write};

use morphocast_runtime::nullable_floats;
use serde::{Deserialize, Serialize};

use crate::error::MetricsError;

/// One forecast under evaluation: the realized future, the prediction,
/// a validity mask over the horizon, and the history that conditions the
/// scaling denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSample {
    pub sample_id: String,
    /// Realized future; missing observations are null and must be masked out.
    #[serde(with = "nullable_floats")]
    pub target: Vec<f64>,
    pub prediction: Vec<f64>,
    /// True where the target is observed and should be scored.
    pub mask: Vec<bool>,
    /// In-sample history, used only by the scaled error.
    #[serde(with = "nullable_floats")]
    pub history: Vec<f64>,
}

impl EvalSample {
    /// Indices of the positions that count toward the metrics.
    pub fn valid_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, keep)| **keep)
            .map(|(t, _)| t)
    }

    fn validate(&self) -> Result<(), MetricsError> {
        if self.target.len() != self.prediction.len() || self.target.len() != self.mask.len() {
            return Err(MetricsError::BadInput(format!(
                "sample {}: target/prediction/mask lengths differ ({}, {}, {})",
                self.sample_id,
                self.target.len(),
                self.prediction.len(),
                self.mask.len()
            )));
        }
        for t in self.valid_positions() {
            if !self.target[t].is_finite() {
                return Err(MetricsError::BadInput(format!(
                    "sample {}: target at valid position {t} is not finite; mask it out",
                    self.sample_id
                )));
            }
            if !self.prediction[t].is_finite() {
                return Err(MetricsError::BadInput(format!(
                    "sample {}: prediction at valid position {t} is not finite",
                    self.sample_id
                )));
            }
        }
        Ok(())
    }
}

/// The full test set; Ω is the union of every sample's valid positions.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSet {
    pub samples: Vec<EvalSample>,
}

impl EvalSet {
    pub fn new(samples: Vec<EvalSample>) -> Result<Self, MetricsError> {
        for sample in &samples {
            sample.validate()?;
        }
        Ok(EvalSet { samples })
    }

    /// |Ω|: total valid positions across all samples.
    pub fn n_positions(&self) -> usize {
        self.samples
            .iter()
            .map(|s| s.valid_positions().count())
            .sum()
    }
}

/// Writes one JSON object per line.
pub fn write_eval_samples(
    writer: &mut dyn Write,
    samples: &[EvalSample],
) -> Result<(), MetricsError> {
    for sample in samples {
        let line = serde_json::to_string(sample)
            .map_err(|err| MetricsError::Malformed(format!("encode {}: {err}", sample.sample_id)))?;
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

/// Reads a JSONL evaluation file, validating every sample.
pub fn read_eval_samples(reader: impl std::io::Read) -> Result<EvalSet, MetricsError> {
    let mut samples = Vec::new();
    for (number, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let sample: EvalSample = serde_json::from_str(&line)
            .map_err(|err| MetricsError::Malformed(format!("line {}: {err}", number + 1)))?;
        samples.push(sample);
    }
    EvalSet::new(samples)
}
