//! Window enumeration over raw series under a global sample budget.
//!
//! Each source series contributes zero or more (history, future) windows:
//! series shorter than the combined horizons are skipped, series too short
//! for a full history yield one maximum-length window, and everything else
//! is covered by sliding windows. The pooled window count is then pulled
//! into a `[budget_floor, budget_cap]` band: oversized pools are subsampled
//! under a square-root-proportional per-series budget, undersized pools are
//! regenerated with progressively denser strides.

use serde::{Deserialize, Serialize};

use crate::error::CorpusError;

/// Window enumeration and budget parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowBudgetConfig {
    /// History length of a sliding window.
    pub history_len: usize,
    /// Short forecast horizon.
    pub horizon_short: usize,
    /// Long forecast horizon.
    pub horizon_long: usize,
    /// Anchor stride for sliding windows.
    pub stride: usize,
    /// Pool ceiling; larger pools are subsampled down to exactly this size.
    pub budget_cap: usize,
    /// Pool floor; smaller pools trigger stride fallback.
    pub budget_floor: usize,
    /// Denser strides tried in order when the pool is under the floor.
    pub fallback_strides: Vec<usize>,
}

impl Default for WindowBudgetConfig {
    fn default() -> Self {
        WindowBudgetConfig {
            history_len: 2048,
            horizon_short: 96,
            horizon_long: 720,
            stride: 512,
            budget_cap: 5000,
            budget_floor: 500,
            fallback_strides: vec![256, 128, 64],
        }
    }
}

impl WindowBudgetConfig {
    /// Checks the config invariants; every violation is `BAD_CONFIG`.
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.history_len < 1 {
            return Err(CorpusError::BadConfig(
                "history_len must be at least 1".into(),
            ));
        }
        if self.horizon_short < 1 {
            return Err(CorpusError::BadConfig(
                "horizon_short must be at least 1".into(),
            ));
        }
        if self.horizon_short > self.horizon_long {
            return Err(CorpusError::BadConfig(format!(
                "horizon_short ({}) must not exceed horizon_long ({})",
                self.horizon_short, self.horizon_long
            )));
        }
        if self.budget_cap < 1 {
            return Err(CorpusError::BadConfig("budget_cap must be at least 1".into()));
        }
        if self.budget_floor > self.budget_cap {
            return Err(CorpusError::BadConfig(format!(
                "budget_floor ({}) must not exceed budget_cap ({})",
                self.budget_floor, self.budget_cap
            )));
        }
        let mut previous = None;
        for &stride in std::iter::once(&self.stride).chain(&self.fallback_strides) {
            if stride < 1 {
                return Err(CorpusError::BadConfig("strides must be positive".into()));
            }
            if let Some(last) = previous {
                if stride >= last {
                    return Err(CorpusError::BadConfig(format!(
                        "strides must be strictly decreasing, got {} after {}",
                        stride, last
                    )));
                }
            }
            previous = Some(stride);
        }
        Ok(())
    }
}

/// How a window was placed on its source series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    /// Regular stride-anchored window with a full-length history.
    Sliding,
    /// Single window over a series too short for a full history; the whole
    /// prefix before the long future becomes the history.
    MaxLength,
}

/// One (history, short future, long future) slice of a source series.
///
/// All positions are indices into the source series. The short future is
/// always a prefix of the long future, so both start at the same index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub series_id: String,
    pub hist_start: usize,
    pub hist_len: usize,
    pub future_short_start: usize,
    pub future_short_len: usize,
    pub future_long_start: usize,
    pub future_long_len: usize,
    pub kind: WindowKind,
}

impl WindowSpec {
    /// End of the long future window, one past the last index used.
    pub fn end(&self) -> usize {
        self.future_long_start + self.future_long_len
    }
}

/// Which budget branch fired during generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetOutcome {
    /// The pool already sat inside the budget band.
    Unchanged,
    /// The pool exceeded the cap and was subsampled down to it.
    Capped,
    /// The pool was under the floor; the recorded stride got it over.
    Escalated { stride: usize },
    /// Every fallback stride still left the pool under the floor; the
    /// densest stride's windows are kept anyway.
    Exhausted { stride: usize },
}

/// Windows plus a note on how the budget was met.
#[derive(Debug, Clone)]
pub struct WindowingResult {
    pub windows: Vec<WindowSpec>,
    pub outcome: BudgetOutcome,
}

/// Enumerates budgeted windows over `(series_id, length)` pairs.
///
/// Per series of length `n` with history length `L` and horizons
/// `H_s <= H_l`: skipped when `n < H_s + H_l`; one maximum-length window
/// when `n < L + H_l` (history is the whole prefix before the long future);
/// otherwise `floor((n - L - H_l) / stride) + 1` sliding windows anchored
/// at multiples of the stride. Oversized pools are subsampled so per-series
/// quotas proportional to the square root of each series' window count sum
/// to exactly the cap; undersized pools are regenerated with each fallback
/// stride in turn until the floor is reached or the strides run out.
pub fn generate_windows(
    sequences: &[(String, usize)],
    config: &WindowBudgetConfig,
) -> Result<Vec<WindowSpec>, CorpusError> {
    Ok(generate_windows_detailed(sequences, config)?.windows)
}

/// [`generate_windows`] plus the budget branch taken, for CLI reporting.
pub fn generate_windows_detailed(
    sequences: &[(String, usize)],
    config: &WindowBudgetConfig,
) -> Result<WindowingResult, CorpusError> {
    config.validate()?;

    let mut per_series = enumerate_all(sequences, config, config.stride);
    let total: usize = per_series.iter().map(Vec::len).sum();

    if total > config.budget_cap {
        let counts: Vec<usize> = per_series.iter().map(Vec::len).collect();
        let quotas = sqrt_budgets(&counts, config.budget_cap);
        for (windows, &quota) in per_series.iter_mut().zip(&quotas) {
            subsample(windows, quota);
        }
        return Ok(WindowingResult {
            windows: per_series.into_iter().flatten().collect(),
            outcome: BudgetOutcome::Capped,
        });
    }

    if total < config.budget_floor {
        let mut last_stride = config.stride;
        for &stride in &config.fallback_strides {
            per_series = enumerate_all(sequences, config, stride);
            last_stride = stride;
            let regrown: usize = per_series.iter().map(Vec::len).sum();
            if regrown >= config.budget_floor {
                return Ok(WindowingResult {
                    windows: per_series.into_iter().flatten().collect(),
                    outcome: BudgetOutcome::Escalated { stride },
                });
            }
        }
        return Ok(WindowingResult {
            windows: per_series.into_iter().flatten().collect(),
            outcome: BudgetOutcome::Exhausted { stride: last_stride },
        });
    }

    Ok(WindowingResult {
        windows: per_series.into_iter().flatten().collect(),
        outcome: BudgetOutcome::Unchanged,
    })
}

fn enumerate_all(
    sequences: &[(String, usize)],
    config: &WindowBudgetConfig,
    stride: usize,
) -> Vec<Vec<WindowSpec>> {
    sequences
        .iter()
        .map(|(id, length)| enumerate_series(id, *length, config, stride))
        .collect()
}

fn enumerate_series(
    series_id: &str,
    n: usize,
    config: &WindowBudgetConfig,
    stride: usize,
) -> Vec<WindowSpec> {
    let h_s = config.horizon_short;
    let h_l = config.horizon_long;
    let l = config.history_len;

    if n < h_s + h_l {
        return Vec::new();
    }

    let window = |hist_start: usize, hist_len: usize, kind: WindowKind| {
        let future_start = hist_start + hist_len;
        WindowSpec {
            series_id: series_id.to_string(),
            hist_start,
            hist_len,
            future_short_start: future_start,
            future_short_len: h_s,
            future_long_start: future_start,
            future_long_len: h_l,
            kind,
        }
    };

    if n < l + h_l {
        return vec![window(0, n - h_l, WindowKind::MaxLength)];
    }

    let count = (n - l - h_l) / stride + 1;
    (0..count)
        .map(|i| window(i * stride, l, WindowKind::Sliding))
        .collect()
}

/// Splits `cap` across series with window counts `counts`, proportional to
/// the square root of each count, summing to exactly `cap`.
///
/// Fractional shares are settled by largest remainder; ties go to the larger
/// remainder, then the larger count, then the earlier series. A quota never
/// exceeds the series' own count: overfull series are pinned at capacity and
/// the leftover is re-split over the rest.
fn sqrt_budgets(counts: &[usize], cap: usize) -> Vec<usize> {
    let mut quota = vec![0usize; counts.len()];
    let mut pinned = vec![false; counts.len()];
    let mut remaining = cap;

    loop {
        let free: Vec<usize> = (0..counts.len())
            .filter(|&i| !pinned[i] && counts[i] > 0)
            .collect();
        if free.is_empty() || remaining == 0 {
            break;
        }

        let weight_sum: f64 = free.iter().map(|&i| (counts[i] as f64).sqrt()).sum();
        let mut shares: Vec<(usize, usize, f64)> = Vec::with_capacity(free.len());
        let mut assigned = 0usize;
        for &i in &free {
            let raw = remaining as f64 * (counts[i] as f64).sqrt() / weight_sum;
            let base = raw.floor() as usize;
            shares.push((i, base, raw - raw.floor()));
            assigned += base;
        }

        let mut leftover = remaining.saturating_sub(assigned);
        shares.sort_by(|a, b| {
            b.2.total_cmp(&a.2)
                .then_with(|| counts[b.0].cmp(&counts[a.0]))
                .then_with(|| a.0.cmp(&b.0))
        });
        for share in shares.iter_mut() {
            if leftover == 0 {
                break;
            }
            share.1 += 1;
            leftover -= 1;
        }

        let overfull: Vec<usize> = shares
            .iter()
            .filter(|&&(i, q, _)| q > counts[i])
            .map(|&(i, _, _)| i)
            .collect();
        if overfull.is_empty() {
            for &(i, q, _) in &shares {
                quota[i] = q;
            }
            break;
        }
        for i in overfull {
            pinned[i] = true;
            quota[i] = counts[i];
            remaining -= counts[i];
        }
    }

    quota
}

/// Keeps `quota` evenly spaced windows out of the current list, always
/// including the first; index `j` of the kept set maps to source index
/// `floor(j * len / quota)`.
fn subsample(windows: &mut Vec<WindowSpec>, quota: usize) {
    let len = windows.len();
    if quota >= len {
        return;
    }
    if quota == 0 {
        windows.clear();
        return;
    }
    let kept: Vec<WindowSpec> = (0..quota)
        .map(|j| windows[j * len / quota].clone())
        .collect();
    *windows = kept;
}
