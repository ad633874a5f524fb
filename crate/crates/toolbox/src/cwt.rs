//! Ricker-wavelet peak counting.
//!
//! Smooths the window with Ricker wavelets at widths 1..max_width, traces
//! ridge lines of relative maxima across the width scales, and keeps lines
//! that persist long enough and rise clearly above the local noise floor.

use crate::distribution::quantile_of_sorted;
use crate::error::ToolError;
use std::f64::consts::PI;

/// A ridge line is discontinued after this many rows without a new maximum.
const GAP_THRESH: usize = 2;
/// Minimum signal-to-noise ratio for an accepted ridge line.
const MIN_SNR: f64 = 1.0;
/// Percentile of the width-1 response used as the noise floor.
const NOISE_PERCENTILE: f64 = 0.10;

fn ricker(points: usize, width: f64) -> Vec<f64> {
    let amp = 2.0 / ((3.0 * width).sqrt() * PI.powf(0.25));
    let center = (points as f64 - 1.0) / 2.0;
    (0..points)
        .map(|k| {
            let t = k as f64 - center;
            let tsq = t * t;
            let wsq = width * width;
            amp * (1.0 - tsq / wsq) * (-tsq / (2.0 * wsq)).exp()
        })
        .collect()
}

/// Central slice of the full convolution, aligned like a same-length filter.
fn convolve_same(data: &[f64], kernel: &[f64]) -> Vec<f64> {
    let n = data.len();
    let m = kernel.len();
    let offset = (m - 1) / 2;
    (0..n)
        .map(|i| {
            let k = i + offset;
            let j_lo = (k + 1).saturating_sub(m);
            let j_hi = k.min(n - 1);
            (j_lo..=j_hi).map(|j| data[j] * kernel[k - j]).sum()
        })
        .collect()
}

/// Strict relative maxima against immediate neighbours, with edge indices
/// clamped so they can never qualify.
fn relative_maxima(row: &[f64]) -> Vec<bool> {
    let n = row.len();
    (0..n)
        .map(|i| {
            let left = row[i.saturating_sub(1)];
            let right = row[(i + 1).min(n - 1)];
            row[i] > left && row[i] > right
        })
        .collect()
}

struct RidgeLine {
    rows: Vec<usize>,
    cols: Vec<usize>,
    gap: usize,
}

/// Trace ridge lines downward from the widest scale with any maximum.
/// Each maximum at a row attaches to the line whose latest column is
/// closest, when within that row's distance allowance; otherwise it
/// starts a new line. Lines are returned sorted by row.
fn identify_ridge_lines(
    maxima: &[Vec<bool>],
    max_distances: &[f64],
) -> Vec<(Vec<usize>, Vec<usize>)> {
    let start_row = match (0..maxima.len()).rev().find(|&r| maxima[r].iter().any(|&b| b)) {
        Some(r) => r,
        None => return Vec::new(),
    };
    let mut active: Vec<RidgeLine> = maxima[start_row]
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(col, _)| RidgeLine { rows: vec![start_row], cols: vec![col], gap: 0 })
        .collect();
    let mut finished: Vec<RidgeLine> = Vec::new();

    for row in (0..start_row).rev() {
        for line in &mut active {
            line.gap += 1;
        }
        // Attachment targets are the line tails as of the start of this row;
        // lines created during the row are not candidates until the next one.
        let prev_cols: Vec<usize> = active.iter().map(|l| *l.cols.last().unwrap()).collect();
        let candidates = prev_cols.len();
        for (col, _) in maxima[row].iter().enumerate().filter(|(_, &b)| b) {
            let closest = (0..candidates)
                .min_by_key(|&i| (prev_cols[i] as i64 - col as i64).abs());
            match closest {
                Some(i)
                    if (prev_cols[i] as i64 - col as i64).unsigned_abs() as f64
                        <= max_distances[row] =>
                {
                    active[i].rows.push(row);
                    active[i].cols.push(col);
                    active[i].gap = 0;
                }
                _ => active.push(RidgeLine { rows: vec![row], cols: vec![col], gap: 0 }),
            }
        }
        let mut still_active = Vec::with_capacity(active.len());
        for line in active {
            if line.gap > GAP_THRESH {
                finished.push(line);
            } else {
                still_active.push(line);
            }
        }
        active = still_active;
    }

    finished
        .into_iter()
        .chain(active)
        .map(|line| {
            // Stable argsort by row, then scatter through it, so entries
            // sharing a row keep a deterministic arrangement.
            let mut order: Vec<usize> = (0..line.rows.len()).collect();
            order.sort_by_key(|&i| line.rows[i]);
            let mut rows = vec![0; line.rows.len()];
            let mut cols = vec![0; line.cols.len()];
            for (i, &slot) in order.iter().enumerate() {
                rows[slot] = line.rows[i];
                cols[slot] = line.cols[i];
            }
            (rows, cols)
        })
        .collect()
}

/// Per-column noise floor: a low percentile of the signed width-1
/// response over a sliding window of about one twentieth of the series.
/// On oscillating signals this sits below zero, which tightens the
/// ratio test for weak maxima.
fn noise_floor(row_one: &[f64]) -> Vec<f64> {
    let n = row_one.len();
    let window_size = (n as f64 / 20.0).ceil() as usize;
    let half = window_size / 2;
    let odd = window_size % 2;
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(half);
            let end = (i + half + odd).min(n);
            let mut window: Vec<f64> = row_one[start..end].to_vec();
            window.sort_by(f64::total_cmp);
            quantile_of_sorted(&window, NOISE_PERCENTILE)
        })
        .collect()
}

/// Number of ridge-line peaks found by wavelet smoothing at widths
/// 1..max_width. Flat windows have no peaks by convention.
///
/// # Errors
/// `BAD_PARAM` when max_width < 1; `WINDOW_TOO_SHORT` below 3 points;
/// `HAS_MISSING` when the window contains non-finite values.
pub fn number_cwt_peaks(values: &[f64], max_width: usize) -> Result<f64, ToolError> {
    if max_width < 1 {
        return Err(ToolError::BadParam("max_width must be at least 1".into()));
    }
    let n = values.len();
    if n < 3 {
        return Err(ToolError::WindowTooShort(format!(
            "number_cwt_peaks needs at least 3 points, found {n}"
        )));
    }
    crate::reject_missing(values)?;
    if values.iter().all(|&v| v == values[0]) {
        return Ok(0.0);
    }

    let widths: Vec<f64> = (1..=max_width).map(|w| w as f64).collect();
    let cwt: Vec<Vec<f64>> = widths
        .iter()
        .map(|&w| {
            let points = ((10.0 * w) as usize).min(n);
            let mut kernel = ricker(points, w);
            kernel.reverse();
            convolve_same(values, &kernel)
        })
        .collect();

    let maxima: Vec<Vec<bool>> = cwt.iter().map(|row| relative_maxima(row)).collect();
    let max_distances: Vec<f64> = widths.iter().map(|w| w / 4.0).collect();
    let lines = identify_ridge_lines(&maxima, &max_distances);

    let min_length = (widths.len() as f64 / 4.0).ceil() as usize;
    let noises = noise_floor(&cwt[0]);
    let peaks = lines
        .iter()
        .filter(|(rows, cols)| {
            if rows.len() < min_length {
                return false;
            }
            let snr = (cwt[rows[0]][cols[0]] / noises[cols[0]]).abs();
            !(snr < MIN_SNR)
        })
        .count();
    Ok(peaks as f64)
}
