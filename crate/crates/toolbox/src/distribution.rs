//! Quantile and corridor-change tools.

use crate::error::ToolError;
use crate::finite_values;

/// Linear-interpolation quantile of an ascending-sorted slice.
pub(crate) fn quantile_of_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = q * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Linear-interpolation quantile over the sorted finite window values.
///
/// # Errors
/// `BAD_PARAM` unless 0 ≤ q ≤ 1; `ALL_MISSING` on empty windows.
pub fn quantile(values: &[f64], q: f64) -> Result<f64, ToolError> {
    if !(0.0..=1.0).contains(&q) {
        return Err(ToolError::BadParam(format!("q must lie in [0, 1], got {q}")));
    }
    let mut finite = finite_values(values);
    if finite.is_empty() {
        return Err(ToolError::AllMissing);
    }
    finite.sort_by(f64::total_cmp);
    Ok(quantile_of_sorted(&finite, q))
}

/// Aggregation applied to the corridor changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeAgg {
    Mean,
    Var,
}

/// Aggregated consecutive change inside the quantile corridor
/// [quantile(q_l), quantile(q_h)]. A pair contributes only when both
/// endpoints are finite and inside the corridor; with no qualifying pair
/// the result is 0.
///
/// # Errors
/// `BAD_PARAM` unless 0 ≤ q_l < q_h ≤ 1; `ALL_MISSING` on empty windows.
pub fn change_quantiles(
    values: &[f64],
    q_l: f64,
    q_h: f64,
    is_abs: bool,
    agg: ChangeAgg,
) -> Result<f64, ToolError> {
    if !(0.0..=1.0).contains(&q_l) || !(0.0..=1.0).contains(&q_h) || q_l >= q_h {
        return Err(ToolError::BadParam(format!(
            "corridor quantiles must satisfy 0 <= q_l < q_h <= 1, got q_l={q_l}, q_h={q_h}"
        )));
    }
    let lo = quantile(values, q_l)?;
    let hi = quantile(values, q_h)?;
    let inside = |v: f64| v.is_finite() && v >= lo && v <= hi;
    let diffs: Vec<f64> = values
        .windows(2)
        .filter(|pair| inside(pair[0]) && inside(pair[1]))
        .map(|pair| {
            let d = pair[1] - pair[0];
            if is_abs {
                d.abs()
            } else {
                d
            }
        })
        .collect();
    if diffs.is_empty() {
        return Ok(0.0);
    }
    let n = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    Ok(match agg {
        ChangeAgg::Mean => mean,
        ChangeAgg::Var => diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n,
    })
}
