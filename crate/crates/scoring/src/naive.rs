//! Deterministic seasonal-naive baseline scorer. Stands in for a trained
//! forecaster wherever a reward signal is needed offline; ignores the
//! description text by design.

use crate::{ForecastHead, QuantileForecast, QuantileLevels, Scorer, ScoringError};
use morphocast_series::NormStats;

/// Repeats the last observed season, in normalized space, across every
/// quantile column. Seasonal source values that are missing predict 0
/// (the normalized history mean).
#[derive(Debug, Clone)]
pub struct SeasonalNaiveScorer {
    season: usize,
}

impl SeasonalNaiveScorer {
    pub fn new(season: usize) -> Result<Self, ScoringError> {
        if season == 0 {
            return Err(ScoringError::BadParam("season must be at least 1".into()));
        }
        Ok(SeasonalNaiveScorer { season })
    }

    pub fn season(&self) -> usize {
        self.season
    }
}

impl Scorer for SeasonalNaiveScorer {
    fn forecast(
        &self,
        history: &[f64],
        _description: &str,
        horizons: &[usize],
        levels: &QuantileLevels,
    ) -> Result<QuantileForecast, ScoringError> {
        if history.len() < self.season {
            return Err(ScoringError::WindowTooShort(format!(
                "history of {} values cannot seed a season of {}",
                history.len(),
                self.season
            )));
        }
        let norm = NormStats::from_history(history)?;
        let season_start = history.len() - self.season;
        let mut heads = Vec::with_capacity(horizons.len());
        for &h in horizons {
            let rows: Vec<Vec<f64>> = (1..=h)
                .map(|t| {
                    let src = history[season_start + (t - 1) % self.season];
                    let point = if src.is_finite() { norm.normalize_value(src) } else { 0.0 };
                    vec![point; levels.len()]
                })
                .collect();
            heads.push(ForecastHead::new(h, rows, levels.len())?);
        }
        QuantileForecast::new(heads)
    }
}
