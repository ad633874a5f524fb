//! Autocorrelation tools.

use crate::error::ToolError;
use crate::finite_mean_var;

/// Lag-l autocorrelation with population mean and variance:
/// sum of (X_t − μ)(X_{t+l} − μ) over valid pairs, divided by
/// (pair count · σ²). Pairs with a non-finite endpoint are skipped.
///
/// # Errors
/// `BAD_PARAM` when lag ≥ window length; `ZERO_VARIANCE` on flat windows;
/// `ALL_MISSING`; `WINDOW_TOO_SHORT` when no valid pair exists at the lag.
pub fn autocorrelation(values: &[f64], lag: usize) -> Result<f64, ToolError> {
    let m = values.len();
    if lag >= m {
        return Err(ToolError::BadParam(format!(
            "lag {lag} must be smaller than the window length {m}"
        )));
    }
    let (mean, var, _) = finite_mean_var(values)?;
    if var == 0.0 {
        return Err(ToolError::ZeroVariance);
    }
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for t in 0..m - lag {
        let a = values[t];
        let b = values[t + lag];
        if a.is_finite() && b.is_finite() {
            sum += (a - mean) * (b - mean);
            pairs += 1;
        }
    }
    if pairs == 0 {
        return Err(ToolError::WindowTooShort(format!(
            "no overlapping pair of finite values at lag {lag}"
        )));
    }
    Ok(sum / (pairs as f64 * var))
}

/// Aggregation over the autocorrelation sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutocorrAgg {
    Mean,
    Median,
    Var,
}

/// Aggregates R(1..m) with m = min(maxlag, window length − 1). Lags with
/// no valid pair are skipped.
///
/// # Errors
/// `BAD_PARAM` when maxlag < 1; `ZERO_VARIANCE`; `ALL_MISSING`;
/// `WINDOW_TOO_SHORT` when fewer than two points or no lag is computable.
pub fn agg_autocorrelation(
    values: &[f64],
    maxlag: usize,
    agg: AutocorrAgg,
) -> Result<f64, ToolError> {
    if maxlag < 1 {
        return Err(ToolError::BadParam("maxlag must be at least 1".into()));
    }
    if values.len() < 2 {
        return Err(ToolError::WindowTooShort(format!(
            "agg_autocorrelation needs at least 2 points, found {}",
            values.len()
        )));
    }
    let m = maxlag.min(values.len() - 1);
    let mut rs = Vec::with_capacity(m);
    for lag in 1..=m {
        match autocorrelation(values, lag) {
            Ok(r) => rs.push(r),
            Err(ToolError::WindowTooShort(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    if rs.is_empty() {
        return Err(ToolError::WindowTooShort(
            "no lag in range has an overlapping pair of finite values".into(),
        ));
    }
    let n = rs.len() as f64;
    let mean = rs.iter().sum::<f64>() / n;
    Ok(match agg {
        AutocorrAgg::Mean => mean,
        AutocorrAgg::Median => {
            rs.sort_by(f64::total_cmp);
            let mid = rs.len() / 2;
            if rs.len() % 2 == 1 {
                rs[mid]
            } else {
                (rs[mid - 1] + rs[mid]) / 2.0
            }
        }
        AutocorrAgg::Var => rs.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n,
    })
}
