//! Dispersion and change-magnitude tools.

use crate::error::ToolError;
use crate::{adjacent_finite_diffs, finite_mean_var};

/// Population standard deviation of the finite window values.
///
/// # Errors
/// `ALL_MISSING` when no finite value is present.
pub fn standard_deviation(values: &[f64]) -> Result<f64, ToolError> {
    let (_, var, _) = finite_mean_var(values)?;
    Ok(var.sqrt())
}

/// Mean absolute difference over adjacent finite pairs.
///
/// # Errors
/// `WINDOW_TOO_SHORT` when no adjacent finite pair exists.
pub fn mean_abs_change(values: &[f64]) -> Result<f64, ToolError> {
    let diffs = adjacent_finite_diffs(values);
    if diffs.is_empty() {
        return Err(ToolError::WindowTooShort(
            "mean_abs_change needs at least one adjacent pair of finite values".into(),
        ));
    }
    Ok(diffs.iter().map(|d| d.abs()).sum::<f64>() / diffs.len() as f64)
}

/// Sum of absolute differences over adjacent finite pairs.
///
/// # Errors
/// `WINDOW_TOO_SHORT` when no adjacent finite pair exists.
pub fn absolute_sum_of_changes(values: &[f64]) -> Result<f64, ToolError> {
    let diffs = adjacent_finite_diffs(values);
    if diffs.is_empty() {
        return Err(ToolError::WindowTooShort(
            "absolute_sum_of_changes needs at least one adjacent pair of finite values".into(),
        ));
    }
    Ok(diffs.iter().map(|d| d.abs()).sum())
}

/// Fraction of finite values strictly more than `r` standard deviations
/// from the window mean.
///
/// # Errors
/// `BAD_PARAM` for negative or non-finite `r`; `ALL_MISSING` on empty windows.
pub fn ratio_beyond_r_sigma(values: &[f64], r: f64) -> Result<f64, ToolError> {
    if !r.is_finite() || r < 0.0 {
        return Err(ToolError::BadParam(format!(
            "r must be a non-negative real, got {r}"
        )));
    }
    let (mean, var, n) = finite_mean_var(values)?;
    let threshold = r * var.sqrt();
    let beyond = values
        .iter()
        .filter(|v| v.is_finite() && (**v - mean).abs() > threshold)
        .count();
    Ok(beyond as f64 / n as f64)
}
