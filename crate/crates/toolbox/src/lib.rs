//! Windowed statistical tools over univariate series, with JSON schemas and
//! a name-based dispatcher for the tool-calling protocol.

mod cwt;
mod distribution;
mod dynamics;
mod error;
mod extrema;
mod frequency;
mod periodicity;
mod registry;
mod trend;
mod volatility;

pub use cwt::number_cwt_peaks;
pub use distribution::{change_quantiles, quantile, ChangeAgg};
pub use dynamics::{augmented_dickey_fuller, cid_ce};
pub use error::ToolError;
pub use extrema::{
    extreme_location, longest_strike, mean_n_absolute_max, number_peaks, Extreme, Occurrence,
    StrikeRelation,
};
pub use frequency::{fft_coefficient, fourier_entropy, spkt_welch_density, welch_psd, FftAttr};
pub use periodicity::{agg_autocorrelation, autocorrelation, AutocorrAgg};
pub use registry::{
    dispatch, export_tool_schemas, observation_from, respond, run_tool, tool_names, Category,
    ToolInvocation, ToolSpec, TOOL_COUNT,
};
pub use trend::{linear_trend, TrendFit};
pub use volatility::{
    absolute_sum_of_changes, mean_abs_change, ratio_beyond_r_sigma, standard_deviation,
};

use morphocast_series::stats_of;

/// Finite values of a window, in order.
pub(crate) fn finite_values(values: &[f64]) -> Vec<f64> {
    values.iter().copied().filter(|v| v.is_finite()).collect()
}

/// Mean and population variance over the finite values.
pub(crate) fn finite_mean_var(values: &[f64]) -> Result<(f64, f64, usize), ToolError> {
    let stats = stats_of(values)?;
    Ok((stats.mean, stats.population_variance, stats.n))
}

/// Rejects windows containing any non-finite value.
pub(crate) fn reject_missing(values: &[f64]) -> Result<(), ToolError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ToolError::HasMissing);
    }
    Ok(())
}

/// Consecutive differences over adjacent finite pairs.
pub(crate) fn adjacent_finite_diffs(values: &[f64]) -> Vec<f64> {
    values
        .windows(2)
        .filter(|pair| pair[0].is_finite() && pair[1].is_finite())
        .map(|pair| pair[1] - pair[0])
        .collect()
}
