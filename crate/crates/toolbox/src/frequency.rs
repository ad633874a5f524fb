//! Spectral tools: DFT coefficients, Welch density, and spectral entropy.

use crate::error::ToolError;
use crate::reject_missing;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Attribute of a complex Fourier coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FftAttr {
    Real,
    Imag,
    Abs,
    Angle,
}

fn fft_forward(input: &[f64]) -> Vec<Complex<f64>> {
    let mut buffer: Vec<Complex<f64>> =
        input.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buffer.len()).process(&mut buffer);
    buffer
}

/// Requested attribute of the real-input DFT coefficients, one entry per
/// requested index, in request order. Angles are in degrees.
///
/// # Errors
/// `HAS_MISSING`; `BAD_PARAM` when `coeffs` is empty or an index exceeds
/// the one-sided spectrum 0..=n/2.
pub fn fft_coefficient(
    values: &[f64],
    coeffs: &[usize],
    attr: FftAttr,
) -> Result<Vec<(usize, f64)>, ToolError> {
    reject_missing(values)?;
    if coeffs.is_empty() {
        return Err(ToolError::BadParam("coeffs must not be empty".into()));
    }
    let n = values.len();
    let max_k = n / 2;
    if let Some(&bad) = coeffs.iter().find(|&&k| k > max_k) {
        return Err(ToolError::BadParam(format!(
            "coefficient {bad} is outside the one-sided spectrum 0..={max_k} of a {n}-point window"
        )));
    }
    let spectrum = fft_forward(values);
    Ok(coeffs
        .iter()
        .map(|&k| {
            let c = spectrum[k];
            let v = match attr {
                FftAttr::Real => c.re,
                FftAttr::Imag => c.im,
                FftAttr::Abs => c.norm(),
                FftAttr::Angle => c.im.atan2(c.re).to_degrees(),
            };
            (k, v)
        })
        .collect())
}

/// Welch power spectral density at unit sample rate.
///
/// Segments of min(256, n) points with 50% overlap are mean-detrended,
/// tapered by a periodic Hann window, and their one-sided periodograms
/// averaged. Returns one density value per frequency bin 0..=nperseg/2.
pub fn welch_psd(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let nperseg = n.min(256);
    let noverlap = nperseg / 2;
    let step = nperseg - noverlap;

    let window: Vec<f64> = (0..nperseg)
        .map(|k| 0.5 - 0.5 * (2.0 * PI * k as f64 / nperseg as f64).cos())
        .collect();
    let scale = 1.0 / window.iter().map(|w| w * w).sum::<f64>();
    let n_bins = nperseg / 2 + 1;
    let nyquist_bin = if nperseg % 2 == 0 { Some(n_bins - 1) } else { None };

    let mut psd = vec![0.0; n_bins];
    let mut segments = 0usize;
    let mut start = 0usize;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(nperseg);
    while start + nperseg <= n {
        let segment = &values[start..start + nperseg];
        let mean = segment.iter().sum::<f64>() / nperseg as f64;
        let mut buffer: Vec<Complex<f64>> = segment
            .iter()
            .zip(&window)
            .map(|(&v, &w)| Complex::new((v - mean) * w, 0.0))
            .collect();
        fft.process(&mut buffer);
        for (k, acc) in psd.iter_mut().enumerate() {
            let mut power = buffer[k].norm_sqr() * scale;
            if k != 0 && Some(k) != nyquist_bin {
                power *= 2.0;
            }
            *acc += power;
        }
        segments += 1;
        start += step;
    }
    for acc in &mut psd {
        *acc /= segments as f64;
    }
    psd
}

fn check_welch_window(values: &[f64]) -> Result<(), ToolError> {
    if values.len() < 8 {
        return Err(ToolError::WindowTooShort(format!(
            "spectral density needs at least 8 points, found {}",
            values.len()
        )));
    }
    reject_missing(values)
}

/// Welch density sampled at the requested frequency-bin indices, in
/// request order.
///
/// # Errors
/// `WINDOW_TOO_SHORT` below 8 points; `HAS_MISSING`; `BAD_PARAM` when
/// `coeffs` is empty or an index exceeds the bin range.
pub fn spkt_welch_density(
    values: &[f64],
    coeffs: &[usize],
) -> Result<Vec<(usize, f64)>, ToolError> {
    check_welch_window(values)?;
    if coeffs.is_empty() {
        return Err(ToolError::BadParam("coeffs must not be empty".into()));
    }
    let psd = welch_psd(values);
    if let Some(&bad) = coeffs.iter().find(|&&k| k >= psd.len()) {
        return Err(ToolError::BadParam(format!(
            "coefficient {bad} is outside the {} available frequency bins",
            psd.len()
        )));
    }
    Ok(coeffs.iter().map(|&k| (k, psd[k])).collect())
}

/// Shannon entropy (natural log) of the max-normalized Welch density
/// histogrammed into `bins` equal-width bins on [0, 1]. An identically
/// zero density has entropy 0.
///
/// # Errors
/// As `spkt_welch_density`, plus `BAD_PARAM` when bins < 1.
pub fn fourier_entropy(values: &[f64], bins: usize) -> Result<f64, ToolError> {
    if bins < 1 {
        return Err(ToolError::BadParam("bins must be at least 1".into()));
    }
    check_welch_window(values)?;
    let psd = welch_psd(values);
    let max = psd.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 {
        return Ok(0.0);
    }
    let mut counts = vec![0usize; bins];
    for &p in &psd {
        let idx = (((p / max) * bins as f64).floor() as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let total = psd.len() as f64;
    Ok(counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum())
}
