//! Unit-root testing and complexity estimation.

use crate::error::ToolError;
use crate::{finite_mean_var, reject_missing};
use nalgebra::{DMatrix, DVector};

struct LeastSquares {
    ssr: f64,
    rank: usize,
    t_first: f64,
    dof: usize,
}

/// SVD least squares returning the residual sum of squares, numerical
/// rank, and the t-statistic of the first regressor.
fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>) -> LeastSquares {
    let nrows = x.nrows();
    let ncols = x.ncols();
    let svd = x.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0f64, f64::max);
    let tol = sigma_max * f64::EPSILON * nrows.max(ncols) as f64;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let beta = svd.solve(y, tol).expect("svd computed with u and v_t");
    let residuals = y - x * &beta;
    let ssr = residuals.dot(&residuals);
    let dof = nrows.saturating_sub(ncols);

    let t_first = if rank == ncols && dof > 0 && ssr > 0.0 {
        let sigma2 = ssr / dof as f64;
        let v_t = svd.v_t.as_ref().expect("v_t requested");
        // diag of (XᵀX)⁻¹ via the singular decomposition
        let cov00: f64 = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > tol)
            .map(|(j, &s)| (v_t[(j, 0)] / s).powi(2))
            .sum();
        let se = (sigma2 * cov00).sqrt();
        if se > 0.0 {
            beta[0] / se
        } else {
            f64::NAN
        }
    } else {
        f64::NAN
    };

    LeastSquares { ssr, rank, t_first, dof }
}

/// Rows are responses xdiff[t] for t in trim..len(xdiff); columns are the
/// level x_t, then `p` lagged differences, then the constant, ordered per
/// `const_first`.
fn adf_design(
    values: &[f64],
    xdiff: &[f64],
    trim: usize,
    p: usize,
    const_first: bool,
) -> (DMatrix<f64>, DVector<f64>) {
    let rows = xdiff.len() - trim;
    let cols = p + 2;
    let mut x = DMatrix::zeros(rows, cols);
    let mut y = DVector::zeros(rows);
    for (row, t) in (trim..xdiff.len()).enumerate() {
        y[row] = xdiff[t];
        let (const_col, base) = if const_first { (0, 1) } else { (cols - 1, 0) };
        x[(row, const_col)] = 1.0;
        x[(row, base)] = values[t];
        for j in 1..=p {
            x[(row, base + j)] = xdiff[t - j];
        }
    }
    (x, y)
}

/// Augmented Dickey-Fuller t-statistic with a constant term. The lag
/// order is chosen by AIC over 0..=⌊12·(n/100)^(1/4)⌋ on a common
/// trimmed sample, then the test regression is refit at that lag on all
/// available rows.
///
/// # Errors
/// `WINDOW_TOO_SHORT` below 20 points; `HAS_MISSING`; `SINGULAR` when the
/// test regression is rank-deficient or has zero residual variance.
pub fn augmented_dickey_fuller(values: &[f64]) -> Result<f64, ToolError> {
    let n = values.len();
    if n < 20 {
        return Err(ToolError::WindowTooShort(format!(
            "augmented_dickey_fuller needs at least 20 points, found {n}"
        )));
    }
    reject_missing(values)?;

    let xdiff: Vec<f64> = values.windows(2).map(|p| p[1] - p[0]).collect();
    let maxlag = (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize;

    let mut best_lag = 0usize;
    let mut best_aic = f64::INFINITY;
    let sel_rows = (xdiff.len() - maxlag) as f64;
    for p in 0..=maxlag {
        let (x, y) = adf_design(values, &xdiff, maxlag, p, true);
        let fit = least_squares(&x, &y);
        let aic = if fit.ssr <= 0.0 {
            f64::NEG_INFINITY
        } else {
            sel_rows * (fit.ssr / sel_rows).ln() + 2.0 * fit.rank as f64
        };
        if aic < best_aic {
            best_aic = aic;
            best_lag = p;
        }
    }

    let (x, y) = adf_design(values, &xdiff, best_lag, best_lag, false);
    let fit = least_squares(&x, &y);
    if fit.rank < x.ncols() || fit.dof == 0 || fit.ssr <= 0.0 || !fit.t_first.is_finite() {
        return Err(ToolError::Singular);
    }
    Ok(fit.t_first)
}

/// Root of the summed squared consecutive changes, optionally after
/// z-normalizing the window. A flat window normalizes to 0 by convention.
///
/// # Errors
/// `WINDOW_TOO_SHORT` below 2 points; `HAS_MISSING`.
pub fn cid_ce(values: &[f64], normalize: bool) -> Result<f64, ToolError> {
    if values.len() < 2 {
        return Err(ToolError::WindowTooShort(format!(
            "cid_ce needs at least 2 points, found {}",
            values.len()
        )));
    }
    reject_missing(values)?;
    let sum_sq = |data: &[f64]| -> f64 {
        data.windows(2).map(|p| (p[1] - p[0]).powi(2)).sum::<f64>().sqrt()
    };
    if normalize {
        let (mean, var, _) = finite_mean_var(values)?;
        let std = var.sqrt();
        if std == 0.0 {
            return Ok(0.0);
        }
        let z: Vec<f64> = values.iter().map(|v| (v - mean) / std).collect();
        Ok(sum_sq(&z))
    } else {
        Ok(sum_sq(values))
    }
}
