//! Peak, extreme-location, strike, and absolute-maximum tools.

use crate::error::ToolError;
use crate::{finite_mean_var, finite_values};

/// Count of interior indices strictly greater than all `n` neighbours on
/// each side. Comparisons against a non-finite neighbour fail, so missing
/// values break peaks.
///
/// # Errors
/// `BAD_PARAM` when n < 1; `WINDOW_TOO_SHORT` when the window has fewer
/// than 2n+1 points.
pub fn number_peaks(values: &[f64], n: usize) -> Result<f64, ToolError> {
    if n < 1 {
        return Err(ToolError::BadParam("n must be at least 1".into()));
    }
    let len = values.len();
    if len < 2 * n + 1 {
        return Err(ToolError::WindowTooShort(format!(
            "number_peaks with n={n} needs at least {} points, found {len}",
            2 * n + 1
        )));
    }
    let mut count = 0usize;
    for i in n..len - n {
        let center = values[i];
        let is_peak = (1..=n).all(|k| center > values[i - k] && center > values[i + k]);
        if is_peak {
            count += 1;
        }
    }
    Ok(count as f64)
}

/// Which occurrence of the extreme value to locate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occurrence {
    First,
    Last,
}

/// Which extreme value to locate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Min,
    Max,
}

/// Relative location of the window extreme: first occurrence index divided
/// by the window length, or (last occurrence index + 1) divided by the
/// window length. Indices count window slots, including missing ones.
///
/// # Errors
/// `ALL_MISSING` when no finite value is present.
pub fn extreme_location(
    values: &[f64],
    which: Occurrence,
    kind: Extreme,
) -> Result<f64, ToolError> {
    let finite = finite_values(values);
    if finite.is_empty() {
        return Err(ToolError::AllMissing);
    }
    let target = match kind {
        Extreme::Min => finite.iter().copied().fold(f64::INFINITY, f64::min),
        Extreme::Max => finite.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    let len = values.len() as f64;
    Ok(match which {
        Occurrence::First => {
            let idx = values.iter().position(|&v| v == target).expect("target present");
            idx as f64 / len
        }
        Occurrence::Last => {
            let idx = values.iter().rposition(|&v| v == target).expect("target present");
            (idx + 1) as f64 / len
        }
    })
}

/// Side of the mean a strike must stay on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrikeRelation {
    Above,
    Below,
}

/// Length of the longest run of values strictly above or below the window
/// mean. Missing values break runs.
///
/// # Errors
/// `ALL_MISSING` when no finite value is present.
pub fn longest_strike(values: &[f64], relation: StrikeRelation) -> Result<f64, ToolError> {
    let (mean, _, _) = finite_mean_var(values)?;
    let mut best = 0usize;
    let mut run = 0usize;
    for &v in values {
        let hit = match relation {
            StrikeRelation::Above => v > mean,
            StrikeRelation::Below => v < mean,
        };
        if hit {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    Ok(best as f64)
}

/// Arithmetic mean of the `n` largest absolute finite values.
///
/// # Errors
/// `BAD_PARAM` when n < 1 or n exceeds the finite count.
pub fn mean_n_absolute_max(values: &[f64], n: usize) -> Result<f64, ToolError> {
    if n < 1 {
        return Err(ToolError::BadParam("n must be at least 1".into()));
    }
    let mut magnitudes: Vec<f64> = finite_values(values).iter().map(|v| v.abs()).collect();
    if n > magnitudes.len() {
        return Err(ToolError::BadParam(format!(
            "n={n} exceeds the {} finite values in the window",
            magnitudes.len()
        )));
    }
    magnitudes.sort_by(|a, b| f64::total_cmp(b, a));
    Ok(magnitudes[..n].iter().sum::<f64>() / n as f64)
}
