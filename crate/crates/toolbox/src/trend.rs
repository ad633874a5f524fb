//! Linear least-squares trend fit.

use crate::error::ToolError;
use crate::finite_values;
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Result of regressing window values against their 0-based position
/// among the finite points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendFit {
    pub slope: f64,
    pub intercept: f64,
    pub rvalue: f64,
    pub pvalue: f64,
    pub stderr: f64,
}

/// Ordinary least squares of value against position, with Pearson r, a
/// two-sided t-test on the slope, and the slope standard error.
///
/// Flat windows are reported as `rvalue=0, pvalue=1` rather than an error
/// so callers still receive usable evidence.
///
/// # Errors
/// `WINDOW_TOO_SHORT` with fewer than two finite points.
pub fn linear_trend(values: &[f64]) -> Result<TrendFit, ToolError> {
    let y = finite_values(values);
    let n = y.len();
    if n < 2 {
        return Err(ToolError::WindowTooShort(format!(
            "linear_trend needs at least 2 finite points, found {n}"
        )));
    }
    let nf = n as f64;
    let xmean = (nf - 1.0) / 2.0;
    let ymean = y.iter().sum::<f64>() / nf;

    let mut ssxm = 0.0;
    let mut ssym = 0.0;
    let mut ssxym = 0.0;
    for (i, &v) in y.iter().enumerate() {
        let dx = i as f64 - xmean;
        let dy = v - ymean;
        ssxm += dx * dx;
        ssym += dy * dy;
        ssxym += dx * dy;
    }
    ssxm /= nf;
    ssym /= nf;
    ssxym /= nf;

    let rvalue = if ssxm > 0.0 && ssym > 0.0 {
        (ssxym / (ssxm * ssym).sqrt()).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let slope = ssxym / ssxm;
    let intercept = ymean - slope * xmean;

    let (pvalue, stderr) = if n == 2 {
        let p = if y[0] == y[1] { 1.0 } else { 0.0 };
        (p, 0.0)
    } else {
        let df = nf - 2.0;
        const TINY: f64 = 1e-20;
        let t = rvalue * (df / ((1.0 - rvalue + TINY) * (1.0 + rvalue + TINY))).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
        let p = 2.0 * dist.cdf(-t.abs());
        let se = ((1.0 - rvalue * rvalue) * ssym / ssxm / df).sqrt();
        (p, se)
    };

    Ok(TrendFit { slope, intercept, rvalue, pvalue, stderr })
}
