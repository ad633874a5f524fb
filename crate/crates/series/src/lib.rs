//! Time-series value container, window addressing, and instance
//! normalization shared by the analysis tools and the forecasting objective.
//!
//! A [`Series`] holds an ordered run of `f64` observations in which NaN marks
//! a missing value. Tools address sub-ranges through [`Window`] (half-open
//! `[left, right)`), compute moments over the finite values via
//! [`finite_stats`], and map targets into normalized space with [`NormStats`].

mod error;
mod format;
mod ingest;

pub use error::SeriesError;
pub use format::{format_value, format_values};
pub use ingest::{read_csv, read_csv_path, read_sidecar, read_sidecar_path, NamedSeries};

use serde::{Deserialize, Serialize};

/// Scale floor applied when a history window is (near-)constant.
pub const SCALE_FLOOR: f64 = 1e-8;

/// An immutable run of observations; NaN encodes a missing value.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    timestamps: Option<Vec<String>>,
    frequency_label: Option<String>,
}

impl Series {
    /// Builds a series from raw values.
    ///
    /// # Errors
    /// `Invalid` if `values` is empty.
    pub fn new(values: Vec<f64>) -> Result<Self, SeriesError> {
        if values.is_empty() {
            return Err(SeriesError::Invalid("length must be >= 1".into()));
        }
        Ok(Self {
            values,
            timestamps: None,
            frequency_label: None,
        })
    }

    /// Attaches per-observation timestamps.
    ///
    /// Timestamps are informational strings (the container never does
    /// calendar arithmetic) but must be strictly increasing: numerically when
    /// every entry parses as a number, lexicographically otherwise (which
    /// holds for ISO-8601 and zero-padded encodings).
    ///
    /// # Errors
    /// `Invalid` on a length mismatch or non-increasing order.
    pub fn with_timestamps(mut self, timestamps: Vec<String>) -> Result<Self, SeriesError> {
        if timestamps.len() != self.values.len() {
            return Err(SeriesError::Invalid(format!(
                "timestamp count {} != value count {}",
                timestamps.len(),
                self.values.len()
            )));
        }
        if !strictly_increasing(&timestamps) {
            return Err(SeriesError::Invalid(
                "timestamps must be strictly increasing".into(),
            ));
        }
        self.timestamps = Some(timestamps);
        Ok(self)
    }

    /// Attaches a free-form frequency label such as `"5T"` or `"H"`.
    pub fn with_frequency_label(mut self, label: impl Into<String>) -> Self {
        self.frequency_label = Some(label.into());
        self
    }

    /// All values in order, missing entries as NaN.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Timestamps when attached.
    pub fn timestamps(&self) -> Option<&[String]> {
        self.timestamps.as_deref()
    }

    /// The frequency label when attached.
    pub fn frequency_label(&self) -> Option<&str> {
        self.frequency_label.as_deref()
    }

    /// Number of observations, missing included.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: construction requires at least one observation.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn strictly_increasing(ts: &[String]) -> bool {
    let numeric: Option<Vec<f64>> = ts.iter().map(|s| s.trim().parse::<f64>().ok()).collect();
    match numeric {
        Some(nums) => nums.windows(2).all(|w| w[0] < w[1]),
        None => ts.windows(2).all(|w| w[0] < w[1]),
    }
}

/// Half-open index range `[left, right)` into a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub left: usize,
    pub right: usize,
}

impl Window {
    pub fn new(left: usize, right: usize) -> Self {
        Self { left, right }
    }

    /// Number of slots addressed, `right - left`.
    pub fn len(&self) -> usize {
        self.right.saturating_sub(self.left)
    }

    pub fn is_empty(&self) -> bool {
        self.right <= self.left
    }

    /// Checks the window against a series length.
    ///
    /// # Errors
    /// `OutOfBounds` if the range is empty or extends past `len`.
    pub fn validate(&self, len: usize) -> Result<(), SeriesError> {
        if self.left >= self.right || self.right > len {
            return Err(SeriesError::OutOfBounds {
                left: self.left,
                right: self.right,
                len,
            });
        }
        Ok(())
    }
}

/// Returns the values in `[left, right)`.
///
/// # Errors
/// `OutOfBounds` if the window is empty or extends past the series.
pub fn slice<'a>(series: &'a Series, window: Window) -> Result<&'a [f64], SeriesError> {
    window.validate(series.len())?;
    Ok(&series.values()[window.left..window.right])
}

/// Moments of the finite values inside one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats {
    /// Count of finite values.
    pub n: usize,
    /// Mean of the finite values.
    pub mean: f64,
    /// Population variance of the finite values.
    pub population_variance: f64,
    pub min: f64,
    pub max: f64,
}

impl WindowStats {
    /// Population standard deviation.
    pub fn std(&self) -> f64 {
        self.population_variance.sqrt()
    }
}

/// Computes [`WindowStats`] over the finite values of a window.
///
/// Missing values are skipped (pairwise-complete semantics); the variance is
/// the population variance `(1/n) Σ (x - μ)²`.
///
/// # Errors
/// `OutOfBounds` for an invalid window, `AllMissing` when no finite value
/// remains.
pub fn finite_stats(series: &Series, window: Window) -> Result<WindowStats, SeriesError> {
    let values = slice(series, window)?;
    stats_of(values)
}

/// [`finite_stats`] over a raw slice (already-windowed values).
pub fn stats_of(values: &[f64]) -> Result<WindowStats, SeriesError> {
    let mut n = 0usize;
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        if v.is_finite() {
            n += 1;
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
    }
    if n == 0 {
        return Err(SeriesError::AllMissing);
    }
    let mean = sum / n as f64;
    let mut ss = 0.0;
    for &v in values {
        if v.is_finite() {
            let d = v - mean;
            ss += d * d;
        }
    }
    Ok(WindowStats {
        n,
        mean,
        population_variance: ss / n as f64,
        min,
        max,
    })
}

/// Instance-normalization statistics: `y → (y - loc) / scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormStats {
    /// History mean.
    pub loc: f64,
    /// History population standard deviation, floored at [`SCALE_FLOOR`].
    pub scale: f64,
}

impl NormStats {
    /// Derives normalization statistics from a history window.
    ///
    /// # Errors
    /// `AllMissing` when the history has no finite value.
    pub fn from_history(history: &[f64]) -> Result<Self, SeriesError> {
        let stats = stats_of(history)?;
        Ok(Self {
            loc: stats.mean,
            scale: stats.std().max(SCALE_FLOOR),
        })
    }

    /// Maps one value into normalized space; non-finite values pass through.
    pub fn normalize_value(&self, y: f64) -> f64 {
        (y - self.loc) / self.scale
    }

    /// Inverse of [`NormStats::normalize_value`].
    pub fn denormalize_value(&self, y: f64) -> f64 {
        y * self.scale + self.loc
    }

    /// Maps a slice into normalized space.
    pub fn normalize(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|&y| self.normalize_value(y)).collect()
    }

    /// Inverse of [`NormStats::normalize`].
    pub fn denormalize(&self, values: &[f64]) -> Vec<f64> {
        values.iter().map(|&y| self.denormalize_value(y)).collect()
    }
}

/// Per-series metadata sidecar; any field may hold the literal
/// `"unavailable"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub dataset: String,
    pub domain: String,
    pub freq: String,
    pub dataset_description: String,
    pub var_name: String,
    pub var_desc: String,
    pub unit: String,
}

/// The marker that stands for an absent metadata field.
pub const UNAVAILABLE: &str = "unavailable";

impl Metadata {
    /// Metadata with every field set to `"unavailable"`.
    pub fn unavailable() -> Self {
        Self {
            dataset: UNAVAILABLE.into(),
            domain: UNAVAILABLE.into(),
            freq: UNAVAILABLE.into(),
            dataset_description: UNAVAILABLE.into(),
            var_name: UNAVAILABLE.into(),
            var_desc: UNAVAILABLE.into(),
            unit: UNAVAILABLE.into(),
        }
    }

    /// True when every field equals `"unavailable"`.
    pub fn is_fully_masked(&self) -> bool {
        [
            &self.dataset,
            &self.domain,
            &self.freq,
            &self.dataset_description,
            &self.var_name,
            &self.var_desc,
            &self.unit,
        ]
        .iter()
        .all(|f| f.as_str() == UNAVAILABLE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn slice_basic() {
        let s = Series::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(slice(&s, Window::new(1, 3)).unwrap(), &[2.0, 3.0]);
        assert_eq!(
            slice(&s, Window::new(0, 4)).unwrap(),
            &[1.0, 2.0, 3.0, 4.0]
        );
    }

    #[test]
    fn slice_empty_window_rejected() {
        let s = Series::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let err = slice(&s, Window::new(3, 3)).unwrap_err();
        assert!(matches!(err, SeriesError::OutOfBounds { .. }));
    }

    #[test]
    fn slice_past_end_rejected() {
        let s = Series::new(vec![1.0, 2.0]).unwrap();
        let err = slice(&s, Window::new(0, 3)).unwrap_err();
        assert!(matches!(
            err,
            SeriesError::OutOfBounds {
                left: 0,
                right: 3,
                len: 2
            }
        ));
    }

    #[test]
    fn empty_series_rejected() {
        assert!(Series::new(vec![]).is_err());
    }

    #[test]
    fn finite_stats_hand_values() {
        let s = Series::new(vec![1.0, 2.0, 3.0]).unwrap();
        let st = finite_stats(&s, Window::new(0, 3)).unwrap();
        assert_eq!(st.n, 3);
        assert_relative_eq!(st.mean, 2.0);
        assert_relative_eq!(st.population_variance, 2.0 / 3.0, max_relative = 1e-12);
        assert_eq!(st.min, 1.0);
        assert_eq!(st.max, 3.0);
    }

    #[test]
    fn finite_stats_constant() {
        let s = Series::new(vec![5.0, 5.0, 5.0]).unwrap();
        let st = finite_stats(&s, Window::new(0, 3)).unwrap();
        assert_eq!(st.population_variance, 0.0);
    }

    #[test]
    fn finite_stats_skips_missing() {
        let s = Series::new(vec![1.0, f64::NAN, 3.0]).unwrap();
        let st = finite_stats(&s, Window::new(0, 3)).unwrap();
        assert_eq!(st.n, 2);
        assert_relative_eq!(st.mean, 2.0);
        assert_relative_eq!(st.population_variance, 1.0);
    }

    #[test]
    fn finite_stats_all_missing() {
        let s = Series::new(vec![f64::NAN, f64::NAN]).unwrap();
        let err = finite_stats(&s, Window::new(0, 2)).unwrap_err();
        assert!(matches!(err, SeriesError::AllMissing));
    }

    #[test]
    fn normalize_affine_map() {
        let stats = NormStats {
            loc: 1.0,
            scale: 1.0,
        };
        assert_eq!(stats.normalize(&[0.0, 2.0]), vec![-1.0, 1.0]);
    }

    #[test]
    fn normalize_constant_history_floored() {
        let stats = NormStats::from_history(&[7.0, 7.0, 7.0]).unwrap();
        assert_eq!(stats.scale, SCALE_FLOOR);
        assert!(stats.normalize_value(7.0).is_finite());
    }

    #[test]
    fn normalize_history_oracle() {
        let stats = NormStats::from_history(&[2.0, 4.0, 6.0]).unwrap();
        assert_relative_eq!(stats.loc, 4.0);
        assert_relative_eq!(stats.scale, (8.0f64 / 3.0).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(stats.normalize_value(6.0), 1.224745, max_relative = 1e-6);
    }

    #[test]
    fn timestamps_must_match_length_and_order() {
        let s = Series::new(vec![1.0, 2.0]).unwrap();
        assert!(s
            .clone()
            .with_timestamps(vec!["2020-01-01".into()])
            .is_err());
        assert!(s
            .clone()
            .with_timestamps(vec!["2020-01-02".into(), "2020-01-01".into()])
            .is_err());
        assert!(s
            .with_timestamps(vec!["2020-01-01".into(), "2020-01-02".into()])
            .is_ok());
    }

    #[test]
    fn numeric_timestamps_compare_numerically() {
        let s = Series::new(vec![1.0, 2.0, 3.0]).unwrap();
        // Lexicographically "10" < "9"; numeric comparison must accept this.
        assert!(s
            .with_timestamps(vec!["2".into(), "9".into(), "10".into()])
            .is_ok());
    }

    #[test]
    fn masked_metadata_is_fully_masked() {
        assert!(Metadata::unavailable().is_fully_masked());
        let mut m = Metadata::unavailable();
        m.unit = "MW".into();
        assert!(!m.is_fully_masked());
    }
}
