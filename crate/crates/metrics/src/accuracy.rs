//! Pointwise error metrics over the valid-position set.

use crate::error::MetricsError;
use crate::evalset::{EvalSample, EvalSet};

/// How per-position errors combine into one number.
///
/// Micro pools every valid position into a single average. Macro averages
/// within each sample first and then across samples, weighting every sample
/// equally regardless of how many positions it contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    #[default]
    Micro,
    Macro,
}

/// Compensated running sum; keeps pooled averages stable when Ω is large.
#[derive(Debug, Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    compensation: f64,
}

impl Kahan {
    fn add(&mut self, value: f64) {
        let adjusted = value - self.compensation;
        let next = self.sum + adjusted;
        self.compensation = (next - self.sum) - adjusted;
        self.sum = next;
    }

    fn total(self) -> f64 {
        self.sum
    }
}

fn mean_over_omega(
    set: &EvalSet,
    aggregation: Aggregation,
    per_position: impl Fn(usize, &EvalSample, usize) -> f64,
) -> Result<f64, MetricsError> {
    match aggregation {
        Aggregation::Micro => {
            let mut sum = Kahan::default();
            let mut count = 0usize;
            for (i, sample) in set.samples.iter().enumerate() {
                for t in sample.valid_positions() {
                    sum.add(per_position(i, sample, t));
                    count += 1;
                }
            }
            if count == 0 {
                return Err(MetricsError::EmptyOmega(
                    "every position is masked out".to_string(),
                ));
            }
            Ok(sum.total() / count as f64)
        }
        Aggregation::Macro => {
            let mut sample_means = Kahan::default();
            let mut scored = 0usize;
            for (i, sample) in set.samples.iter().enumerate() {
                let mut sum = Kahan::default();
                let mut count = 0usize;
                for t in sample.valid_positions() {
                    sum.add(per_position(i, sample, t));
                    count += 1;
                }
                if count > 0 {
                    sample_means.add(sum.total() / count as f64);
                    scored += 1;
                }
            }
            if scored == 0 {
                return Err(MetricsError::EmptyOmega(
                    "every position is masked out".to_string(),
                ));
            }
            Ok(sample_means.total() / scored as f64)
        }
    }
}

fn error_at(sample: &EvalSample, t: usize) -> f64 {
    sample.target[t] - sample.prediction[t]
}

/// Mean squared error over Ω.
pub fn mse(set: &EvalSet) -> Result<f64, MetricsError> {
    mse_with(set, Aggregation::Micro)
}

pub fn mse_with(set: &EvalSet, aggregation: Aggregation) -> Result<f64, MetricsError> {
    mean_over_omega(set, aggregation, |_, s, t| error_at(s, t).powi(2))
}

/// Mean absolute error over Ω.
pub fn mae(set: &EvalSet) -> Result<f64, MetricsError> {
    mae_with(set, Aggregation::Micro)
}

pub fn mae_with(set: &EvalSet, aggregation: Aggregation) -> Result<f64, MetricsError> {
    mean_over_omega(set, aggregation, |_, s, t| error_at(s, t).abs())
}

/// Scaling settings for the seasonal naive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaseConfig {
    /// Season length s; the denominator compares each history value to the
    /// one s steps earlier.
    pub season: usize,
}

impl Default for MaseConfig {
    fn default() -> Self {
        MaseConfig { season: 1 }
    }
}

/// Per-sample in-sample seasonal naive error: (1/(L−s)) Σ |x_t − x_{t−s}|.
fn naive_denominator(sample: &EvalSample, season: usize) -> Result<f64, MetricsError> {
    if sample.history.len() <= season {
        return Err(MetricsError::BadInput(format!(
            "sample {}: history of length {} cannot scale at season {}",
            sample.sample_id,
            sample.history.len(),
            season
        )));
    }
    let mut sum = Kahan::default();
    for t in season..sample.history.len() {
        let (late, early) = (sample.history[t], sample.history[t - season]);
        if !late.is_finite() || !early.is_finite() {
            return Err(MetricsError::BadInput(format!(
                "sample {}: scaled error needs a fully observed history",
                sample.sample_id
            )));
        }
        sum.add((late - early).abs());
    }
    let denom = sum.total() / (sample.history.len() - season) as f64;
    if denom == 0.0 {
        return Err(MetricsError::ZeroDenominator(format!(
            "sample {}: history is constant at season {}",
            sample.sample_id, season
        )));
    }
    Ok(denom)
}

/// Mean absolute scaled error: each sample's absolute errors are divided by
/// its own in-sample seasonal naive error before averaging over Ω.
pub fn mase(set: &EvalSet, config: &MaseConfig) -> Result<f64, MetricsError> {
    mase_with(set, config, Aggregation::Micro)
}

pub fn mase_with(
    set: &EvalSet,
    config: &MaseConfig,
    aggregation: Aggregation,
) -> Result<f64, MetricsError> {
    if config.season == 0 {
        return Err(MetricsError::BadInput(
            "season must be at least 1".to_string(),
        ));
    }
    let denominators = set
        .samples
        .iter()
        .map(|s| naive_denominator(s, config.season))
        .collect::<Result<Vec<_>, _>>()?;
    mean_over_omega(set, aggregation, |i, s, t| {
        error_at(s, t).abs() / denominators[i]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(target: Vec<f64>, prediction: Vec<f64>, mask: Vec<bool>) -> EvalSample {
        EvalSample {
            sample_id: "w0000".to_string(),
            target,
            prediction,
            mask,
            history: vec![0.0, 1.0, 0.0, 1.0],
        }
    }

    fn set(samples: Vec<EvalSample>) -> EvalSet {
        EvalSet::new(samples).unwrap()
    }

    #[test]
    fn unit_errors_give_unit_mse_and_mae() {
        let set = set(vec![sample(
            vec![0.0, 2.0],
            vec![1.0, 1.0],
            vec![true, true],
        )]);
        assert_eq!(mse(&set).unwrap(), 1.0);
        assert_eq!(mae(&set).unwrap(), 1.0);
    }

    #[test]
    fn masked_positions_are_excluded() {
        let set = set(vec![sample(
            vec![0.0, 2.0],
            vec![1.0, 1.0],
            vec![true, false],
        )]);
        assert_eq!(mse(&set).unwrap(), 1.0);
        assert_eq!(mae(&set).unwrap(), 1.0);
    }

    #[test]
    fn perfect_predictions_score_zero() {
        let set = set(vec![sample(
            vec![3.0, -1.5],
            vec![3.0, -1.5],
            vec![true, true],
        )]);
        assert_eq!(mse(&set).unwrap(), 0.0);
        assert_eq!(mae(&set).unwrap(), 0.0);
    }

    #[test]
    fn fully_masked_set_is_empty_omega() {
        let set = set(vec![sample(
            vec![0.0, 2.0],
            vec![1.0, 1.0],
            vec![false, false],
        )]);
        assert_eq!(mse(&set).unwrap_err().code(), "EMPTY_OMEGA");
        assert_eq!(mae_with(&set, Aggregation::Macro).unwrap_err().code(), "EMPTY_OMEGA");
    }

    #[test]
    fn micro_pools_positions_while_macro_weights_samples() {
        let set = set(vec![
            sample(vec![3.0], vec![0.0], vec![true]),
            sample(vec![1.0, 1.0], vec![0.0, 0.0], vec![true, true]),
        ]);
        assert!((mae(&set).unwrap() - 5.0 / 3.0).abs() <= 1e-12);
        assert_eq!(mae_with(&set, Aggregation::Macro).unwrap(), 2.0);
    }

    #[test]
    fn scaled_error_matches_hand_arithmetic() {
        // History [0,1,0,1] at season 1: denominator (1+1+1)/3 = 1.
        // Last-value-naive continuation of the alternation is [1,0];
        // prediction [1,1] misses one of two points, MAE 0.5.
        let set = set(vec![sample(
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![true, true],
        )]);
        let config = MaseConfig::default();
        assert_eq!(config.season, 1);
        assert_eq!(mase(&set, &config).unwrap(), 0.5);
    }

    #[test]
    fn exact_continuation_scores_zero() {
        let set = set(vec![sample(
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![true, true],
        )]);
        assert_eq!(mase(&set, &MaseConfig::default()).unwrap(), 0.0);
    }

    #[test]
    fn constant_history_has_no_scale() {
        let mut flat = sample(vec![1.0], vec![0.0], vec![true]);
        flat.history = vec![2.0, 2.0, 2.0];
        let set = set(vec![flat]);
        let err = mase(&set, &MaseConfig::default()).unwrap_err();
        assert_eq!(err.code(), "ZERO_DENOMINATOR");
    }

    #[test]
    fn season_must_fit_inside_history() {
        let set = set(vec![sample(vec![1.0], vec![0.0], vec![true])]);
        let err = mase(&set, &MaseConfig { season: 4 }).unwrap_err();
        assert_eq!(err.code(), "BAD_INPUT");

        let err = mase(&set, &MaseConfig { season: 0 }).unwrap_err();
        assert_eq!(err.code(), "BAD_INPUT");
    }

    #[test]
    fn gappy_history_cannot_scale() {
        let mut gappy = sample(vec![1.0], vec![0.0], vec![true]);
        gappy.history = vec![0.0, f64::NAN, 1.0];
        let set = set(vec![gappy]);
        let err = mase(&set, &MaseConfig::default()).unwrap_err();
        assert_eq!(err.code(), "BAD_INPUT");
        assert!(err.to_string().contains("fully observed"));
    }

    #[test]
    fn each_sample_scales_by_its_own_history() {
        // Same absolute error 1.0, but the second history moves in steps
        // of 2, halving its scaled error.
        let first = sample(vec![1.0], vec![0.0], vec![true]);
        let mut second = sample(vec![1.0], vec![0.0], vec![true]);
        second.history = vec![0.0, 2.0, 4.0, 6.0];
        let set = set(vec![first, second]);
        assert_eq!(mase(&set, &MaseConfig::default()).unwrap(), 0.75);
        assert_eq!(
            mase_with(&set, &MaseConfig::default(), Aggregation::Macro).unwrap(),
            0.75
        );
    }
}
