//! Tool registry: specs, JSON schemas, and name-based dispatch.

use crate::error::ToolError;
use crate::{
    absolute_sum_of_changes, agg_autocorrelation, augmented_dickey_fuller, autocorrelation,
    change_quantiles, cid_ce, extreme_location, fft_coefficient, fourier_entropy, linear_trend,
    longest_strike, mean_abs_change, mean_n_absolute_max, number_cwt_peaks, number_peaks,
    quantile, ratio_beyond_r_sigma, spkt_welch_density, standard_deviation, AutocorrAgg,
    ChangeAgg, Extreme, FftAttr, Occurrence, StrikeRelation,
};
use morphocast_series::{slice, Series, Window};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::sync::OnceLock;

/// Number of registered tools.
pub const TOOL_COUNT: usize = 23;

/// Tool grouping used for schema ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Category {
    Trend,
    Volatility,
    Distribution,
    Periodicity,
    Extrema,
    Frequency,
    Dynamics,
}

impl Category {
    pub fn name(&self) -> &'static str {
        match self {
            Category::Trend => "Trend",
            Category::Volatility => "Volatility",
            Category::Distribution => "Distribution",
            Category::Periodicity => "Periodicity",
            Category::Extrema => "Extrema",
            Category::Frequency => "Frequency",
            Category::Dynamics => "Dynamics",
        }
    }
}

type ArgMap = Map<String, Value>;
/// Flat JSON payload of a successful tool run.
pub type Observation = Map<String, Value>;

/// Registry entry: identity, documentation, schema fragments, and the
/// execution adapter.
pub struct ToolSpec {
    pub name: &'static str,
    pub category: Category,
    pub description: &'static str,
    extra_params: Vec<(&'static str, Value, bool)>,
    exec: fn(&[f64], &ArgMap) -> Result<Observation, ToolError>,
}

fn num(v: f64) -> Value {
    // Non-finite payloads have no JSON number form; null keeps the field
    // visible without inventing a value.
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

fn single_value(v: f64) -> Observation {
    let mut obs = Observation::new();
    obs.insert("value".into(), num(v));
    obs
}

fn require(args: &ArgMap, key: &str) -> Result<Value, ToolError> {
    args.get(key)
        .cloned()
        .ok_or_else(|| ToolError::BadParam(format!("missing required argument `{key}`")))
}

fn require_real(args: &ArgMap, key: &str) -> Result<f64, ToolError> {
    require(args, key)?
        .as_f64()
        .ok_or_else(|| ToolError::BadParam(format!("argument `{key}` must be a number")))
}

fn index_from(value: &Value, key: &str) -> Result<usize, ToolError> {
    if let Some(u) = value.as_u64() {
        return Ok(u as usize);
    }
    if let Some(f) = value.as_f64() {
        if f >= 0.0 && f.fract() == 0.0 && f <= (1u64 << 53) as f64 {
            return Ok(f as usize);
        }
    }
    Err(ToolError::BadParam(format!(
        "argument `{key}` must be a non-negative integer"
    )))
}

fn require_index(args: &ArgMap, key: &str) -> Result<usize, ToolError> {
    index_from(&require(args, key)?, key)
}

fn require_bool(args: &ArgMap, key: &str) -> Result<bool, ToolError> {
    require(args, key)?
        .as_bool()
        .ok_or_else(|| ToolError::BadParam(format!("argument `{key}` must be a boolean")))
}

fn require_choice(args: &ArgMap, key: &str, allowed: &[&str]) -> Result<String, ToolError> {
    let v = require(args, key)?;
    let s = v
        .as_str()
        .ok_or_else(|| ToolError::BadParam(format!("argument `{key}` must be a string")))?;
    if !allowed.contains(&s) {
        return Err(ToolError::BadParam(format!(
            "argument `{key}` must be one of {allowed:?}, got `{s}`"
        )));
    }
    Ok(s.to_string())
}

fn require_index_list(args: &ArgMap, key: &str) -> Result<Vec<usize>, ToolError> {
    let v = require(args, key)?;
    let arr = v
        .as_array()
        .ok_or_else(|| ToolError::BadParam(format!("argument `{key}` must be an array of integers")))?;
    arr.iter().map(|item| index_from(item, key)).collect()
}

fn coeff_observation(pairs: Vec<(usize, f64)>) -> Observation {
    let mut obs = Observation::new();
    for (k, v) in pairs {
        obs.insert(format!("coeff_{k}"), num(v));
    }
    obs
}

fn window_param(side: &str) -> Value {
    let description = match side {
        "left" => "window start index (inclusive)",
        _ => "window end index (exclusive)",
    };
    json!({"type": "integer", "minimum": 0, "description": description})
}

fn specs() -> &'static [ToolSpec] {
    static SPECS: OnceLock<Vec<ToolSpec>> = OnceLock::new();
    SPECS.get_or_init(build_specs)
}

fn build_specs() -> Vec<ToolSpec> {
    let location = |which: Occurrence, kind: Extreme| {
        move |values: &[f64], _: &ArgMap| {
            extreme_location(values, which, kind).map(single_value)
        }
    };
    let strike = |relation: StrikeRelation| {
        move |values: &[f64], _: &ArgMap| longest_strike(values, relation).map(single_value)
    };
    // Closures above are only for readability; entries below use plain fns
    // so the table stays `fn`-pointer based.
    let _ = (location, strike);

    vec![
        ToolSpec {
            name: "linear_trend",
            category: Category::Trend,
            description: "Calculate a linear least-squares regression for the values of the time series versus the sequence from 0 to length of the time series minus one. This feature assumes the signal to be uniformly sampled. It will not use the time stamps to fit the model. This tool automatically returns the five attributes \"pvalue\", \"rvalue\", \"intercept\", \"slope\", and \"stderr\" from scipy.stats.linregress.",
            extra_params: vec![],
            exec: |values, _| {
                let fit = linear_trend(values)?;
                let mut obs = Observation::new();
                obs.insert("slope".into(), num(fit.slope));
                obs.insert("intercept".into(), num(fit.intercept));
                obs.insert("rvalue".into(), num(fit.rvalue));
                obs.insert("pvalue".into(), num(fit.pvalue));
                obs.insert("stderr".into(), num(fit.stderr));
                Ok(obs)
            },
        },
        ToolSpec {
            name: "absolute_sum_of_changes",
            category: Category::Volatility,
            description: "Returns the sum over the absolute value of consecutive changes: sum over i of |x_{i+1} - x_i|.",
            extra_params: vec![],
            exec: |values, _| absolute_sum_of_changes(values).map(single_value),
        },
        ToolSpec {
            name: "mean_abs_change",
            category: Category::Volatility,
            description: "Average over first differences. Returns the mean over the absolute differences between subsequent time series values: (1/(n-1)) * sum over i of |x_{i+1} - x_i|.",
            extra_params: vec![],
            exec: |values, _| mean_abs_change(values).map(single_value),
        },
        ToolSpec {
            name: "ratio_beyond_r_sigma",
            category: Category::Volatility,
            description: "Ratio of values in the selected time series window that are more than r * sigma away from the mean, where sigma is the standard deviation.",
            extra_params: vec![(
                "r",
                json!({"type": "number", "minimum": 0, "description": "distance from the mean in standard deviations"}),
                true,
            )],
            exec: |values, args| {
                let r = require_real(args, "r")?;
                ratio_beyond_r_sigma(values, r).map(single_value)
            },
        },
        ToolSpec {
            name: "standard_deviation",
            category: Category::Volatility,
            description: "Returns the standard deviation of the selected time series window.",
            extra_params: vec![],
            exec: |values, _| standard_deviation(values).map(single_value),
        },
        ToolSpec {
            name: "change_quantiles",
            category: Category::Distribution,
            description: "First fixes a corridor given by the quantiles q_l and q_h of the distribution of the selected time series window. Then calculates the average consecutive change inside this corridor.",
            extra_params: vec![
                (
                    "q_l",
                    json!({"type": "number", "minimum": 0, "maximum": 1, "description": "lower corridor quantile"}),
                    true,
                ),
                (
                    "q_h",
                    json!({"type": "number", "minimum": 0, "maximum": 1, "description": "upper corridor quantile"}),
                    true,
                ),
                (
                    "is_abs",
                    json!({"type": "boolean", "description": "use absolute changes"}),
                    true,
                ),
                (
                    "agg",
                    json!({"type": "string", "enum": ["mean", "var"], "description": "aggregation over the corridor changes"}),
                    true,
                ),
            ],
            exec: |values, args| {
                let q_l = require_real(args, "q_l")?;
                let q_h = require_real(args, "q_h")?;
                let is_abs = require_bool(args, "is_abs")?;
                let agg = match require_choice(args, "agg", &["mean", "var"])?.as_str() {
                    "mean" => ChangeAgg::Mean,
                    _ => ChangeAgg::Var,
                };
                change_quantiles(values, q_l, q_h, is_abs, agg).map(single_value)
            },
        },
        ToolSpec {
            name: "quantile",
            category: Category::Distribution,
            description: "Calculates the q quantile of the selected time series window. This is the value greater than q% of the ordered values.",
            extra_params: vec![(
                "q",
                json!({"type": "number", "minimum": 0, "maximum": 1, "description": "quantile level in [0, 1]"}),
                true,
            )],
            exec: |values, args| {
                let q = require_real(args, "q")?;
                quantile(values, q).map(single_value)
            },
        },
        ToolSpec {
            name: "agg_autocorrelation",
            category: Category::Periodicity,
            description: "Descriptive statistics on the autocorrelation of the time series. Calculates the value of an aggregation function f_agg (e.g. the variance or the mean) over the autocorrelation R(l) for different lags. Returns f_agg(R(1), ..., R(m)) with m = min(maxlag, window length - 1).",
            extra_params: vec![
                (
                    "maxlag",
                    json!({"type": "integer", "minimum": 1, "description": "largest lag to include"}),
                    true,
                ),
                (
                    "agg",
                    json!({"type": "string", "enum": ["mean", "median", "var"], "description": "aggregation over the autocorrelations"}),
                    true,
                ),
            ],
            exec: |values, args| {
                let maxlag = require_index(args, "maxlag")?;
                let agg = match require_choice(args, "agg", &["mean", "median", "var"])?.as_str() {
                    "mean" => AutocorrAgg::Mean,
                    "median" => AutocorrAgg::Median,
                    _ => AutocorrAgg::Var,
                };
                agg_autocorrelation(values, maxlag, agg).map(single_value)
            },
        },
        ToolSpec {
            name: "autocorrelation",
            category: Category::Periodicity,
            description: "Calculates the autocorrelation of the specified lag for the selected time series window, according to the formula 1/((n-l)*sigma^2) * sum over t of (X_t - mu)(X_{t+l} - mu), where n is the window length, sigma^2 its variance, mu its mean, and l denotes the lag.",
            extra_params: vec![(
                "lag",
                json!({"type": "integer", "minimum": 0, "description": "lag in samples"}),
                true,
            )],
            exec: |values, args| {
                let lag = require_index(args, "lag")?;
                autocorrelation(values, lag).map(single_value)
            },
        },
        ToolSpec {
            name: "first_location_of_maximum",
            category: Category::Extrema,
            description: "Returns the first location of the maximum value of the selected time series window. The position is calculated relatively to the length of the window.",
            extra_params: vec![],
            exec: |values, _| {
                extreme_location(values, Occurrence::First, Extreme::Max).map(single_value)
            },
        },
        ToolSpec {
            name: "first_location_of_minimum",
            category: Category::Extrema,
            description: "Returns the first location of the minimal value of the selected time series window. The position is calculated relatively to the length of the window.",
            extra_params: vec![],
            exec: |values, _| {
                extreme_location(values, Occurrence::First, Extreme::Min).map(single_value)
            },
        },
        ToolSpec {
            name: "last_location_of_maximum",
            category: Category::Extrema,
            description: "Returns the relative last location of the maximum value of the selected time series window.",
            extra_params: vec![],
            exec: |values, _| {
                extreme_location(values, Occurrence::Last, Extreme::Max).map(single_value)
            },
        },
        ToolSpec {
            name: "last_location_of_minimum",
            category: Category::Extrema,
            description: "Returns the last location of the minimal value of the selected time series window. The position is calculated relatively to the length of the window.",
            extra_params: vec![],
            exec: |values, _| {
                extreme_location(values, Occurrence::Last, Extreme::Min).map(single_value)
            },
        },
        ToolSpec {
            name: "longest_strike_above_mean",
            category: Category::Extrema,
            description: "Returns the length of the longest consecutive subsequence in the selected time series window that is bigger than the mean.",
            extra_params: vec![],
            exec: |values, _| longest_strike(values, StrikeRelation::Above).map(single_value),
        },
        ToolSpec {
            name: "longest_strike_below_mean",
            category: Category::Extrema,
            description: "Returns the length of the longest consecutive subsequence in the selected time series window that is smaller than the mean.",
            extra_params: vec![],
            exec: |values, _| longest_strike(values, StrikeRelation::Below).map(single_value),
        },
        ToolSpec {
            name: "mean_n_absolute_max",
            category: Category::Extrema,
            description: "Calculates the arithmetic mean of the n absolute maximum values of the time series.",
            extra_params: vec![(
                "n",
                json!({"type": "integer", "minimum": 1, "description": "number of largest magnitudes to average"}),
                true,
            )],
            exec: |values, args| {
                let n = require_index(args, "n")?;
                mean_n_absolute_max(values, n).map(single_value)
            },
        },
        ToolSpec {
            name: "number_cwt_peaks",
            category: Category::Extrema,
            description: "Number of different peaks in the selected time series window. The series is smoothed by a Ricker wavelet for widths ranging from 1 to max_width. Returns the number of peaks that occur at enough width scales and with sufficiently high SNR.",
            extra_params: vec![(
                "max_width",
                json!({"type": "integer", "minimum": 1, "description": "largest smoothing width"}),
                true,
            )],
            exec: |values, args| {
                let max_width = require_index(args, "max_width")?;
                number_cwt_peaks(values, max_width).map(single_value)
            },
        },
        ToolSpec {
            name: "number_peaks",
            category: Category::Extrema,
            description: "Calculates the number of peaks of at least support n in the selected time series window. A peak of support n is defined as a value bigger than its n neighbours to the left and to the right.",
            extra_params: vec![(
                "n",
                json!({"type": "integer", "minimum": 1, "description": "peak support width"}),
                true,
            )],
            exec: |values, args| {
                let n = require_index(args, "n")?;
                number_peaks(values, n).map(single_value)
            },
        },
        ToolSpec {
            name: "fft_coefficient",
            category: Category::Frequency,
            description: "Calculates the Fourier coefficients of the one-dimensional discrete Fourier Transform for real input by FFT. Can return the real part, imaginary part, absolute value, or angle in degrees.",
            extra_params: vec![
                (
                    "coeffs",
                    json!({"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1, "description": "coefficient indices to return"}),
                    true,
                ),
                (
                    "attr",
                    json!({"type": "string", "enum": ["real", "imag", "abs", "angle"], "description": "attribute of each coefficient"}),
                    true,
                ),
            ],
            exec: |values, args| {
                let coeffs = require_index_list(args, "coeffs")?;
                let attr = match require_choice(args, "attr", &["real", "imag", "abs", "angle"])?
                    .as_str()
                {
                    "real" => FftAttr::Real,
                    "imag" => FftAttr::Imag,
                    "abs" => FftAttr::Abs,
                    _ => FftAttr::Angle,
                };
                fft_coefficient(values, &coeffs, attr).map(coeff_observation)
            },
        },
        ToolSpec {
            name: "fourier_entropy",
            category: Category::Frequency,
            description: "Calculate the binned entropy of the power spectral density of the time series (using the Welch method).",
            extra_params: vec![(
                "bins",
                json!({"type": "integer", "minimum": 1, "description": "number of histogram bins"}),
                true,
            )],
            exec: |values, args| {
                let bins = require_index(args, "bins")?;
                fourier_entropy(values, bins).map(single_value)
            },
        },
        ToolSpec {
            name: "spkt_welch_density",
            category: Category::Frequency,
            description: "Estimates the cross power spectral density of the time series at different frequencies. The time series is first shifted from the time domain to the frequency domain. Returns the power spectrum of the different frequencies.",
            extra_params: vec![(
                "coeffs",
                json!({"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1, "description": "frequency-bin indices to return"}),
                true,
            )],
            exec: |values, args| {
                let coeffs = require_index_list(args, "coeffs")?;
                spkt_welch_density(values, &coeffs).map(coeff_observation)
            },
        },
        ToolSpec {
            name: "augmented_dickey_fuller",
            category: Category::Dynamics,
            description: "The Augmented Dickey-Fuller test is a hypothesis test which checks whether a unit root is present in a time series sample. Returns the value of the respective test statistic.",
            extra_params: vec![],
            exec: |values, _| augmented_dickey_fuller(values).map(single_value),
        },
        ToolSpec {
            name: "cid_ce",
            category: Category::Dynamics,
            description: "An estimate for time series complexity. Calculates sqrt(sum over i of (x_i - x_{i-1})^2). A more complex time series has more peaks, valleys, etc.",
            extra_params: vec![(
                "normalize",
                json!({"type": "boolean", "description": "z-normalize the window first"}),
                true,
            )],
            exec: |values, args| {
                let normalize = require_bool(args, "normalize")?;
                cid_ce(values, normalize).map(single_value)
            },
        },
    ]
}

/// Registered tool names in schema order.
pub fn tool_names() -> Vec<&'static str> {
    specs().iter().map(|s| s.name).collect()
}

/// The 23 tool definitions in chat-completions function format, ordered
/// by category then name. Every schema requires `left` and `right`.
pub fn export_tool_schemas() -> Vec<Value> {
    specs()
        .iter()
        .map(|spec| {
            let mut properties = Map::new();
            properties.insert("left".into(), window_param("left"));
            properties.insert("right".into(), window_param("right"));
            let mut required = vec![json!("left"), json!("right")];
            for (name, schema, is_required) in &spec.extra_params {
                properties.insert((*name).into(), schema.clone());
                if *is_required {
                    required.push(json!(name));
                }
            }
            json!({
                "type": "function",
                "function": {
                    "name": spec.name,
                    "description": spec.description,
                    "parameters": {
                        "type": "object",
                        "properties": properties,
                        "required": required,
                    },
                },
            })
        })
        .collect()
}

/// Executes a named tool against a series, returning the flat payload.
///
/// # Errors
/// `UNKNOWN_TOOL`, `BAD_PARAM` for malformed arguments, `OUT_OF_BOUNDS`
/// for invalid windows, plus whatever the tool itself raises.
pub fn run_tool(series: &Series, name: &str, arguments: &Value) -> Result<Observation, ToolError> {
    let spec = specs()
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| ToolError::UnknownTool(name.to_string()))?;
    let args = arguments
        .as_object()
        .ok_or_else(|| ToolError::BadParam("arguments must be a JSON object".into()))?;

    let mut unexpected: Vec<&str> = args
        .keys()
        .map(String::as_str)
        .filter(|k| *k != "left" && *k != "right")
        .filter(|k| !spec.extra_params.iter().any(|(name, _, _)| name == k))
        .collect();
    if !unexpected.is_empty() {
        unexpected.sort_unstable();
        return Err(ToolError::BadParam(format!(
            "unexpected argument(s): {}",
            unexpected.join(", ")
        )));
    }

    let left = require_index(args, "left")?;
    let right = require_index(args, "right")?;
    let values = slice(series, Window::new(left, right))?;
    (spec.exec)(values, args)
}

/// JSON observation for a tool result: the flat payload on success, or
/// `{"error": {"code", "message"}}` on failure.
pub fn observation_from(result: Result<Observation, ToolError>) -> Value {
    match result {
        Ok(obs) => Value::Object(obs),
        Err(err) => json!({"error": {"code": err.code(), "message": err.to_string()}}),
    }
}

/// Runs a tool and always yields an observation JSON value.
pub fn dispatch(series: &Series, name: &str, arguments: &Value) -> Value {
    observation_from(run_tool(series, name, arguments))
}

/// One tool call as carried on the wire.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToolInvocation {
    pub call_id: String,
    pub name: String,
    pub arguments: Value,
}

/// Observation for a wire-format invocation.
pub fn respond(series: &Series, invocation: &ToolInvocation) -> Value {
    dispatch(series, &invocation.name, &invocation.arguments)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_series() -> Series {
        Series::new(vec![1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0, 1.0, 2.0]).unwrap()
    }

    #[test]
    fn exactly_twenty_three_tools() {
        assert_eq!(specs().len(), TOOL_COUNT);
        assert_eq!(export_tool_schemas().len(), TOOL_COUNT);
    }

    #[test]
    fn names_are_unique() {
        let mut names = tool_names();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), TOOL_COUNT);
    }

    #[test]
    fn ordered_by_category_then_name() {
        let order: Vec<(Category, &str)> =
            specs().iter().map(|s| (s.category, s.name)).collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
        assert_eq!(specs()[0].name, "linear_trend");
        assert_eq!(specs()[TOOL_COUNT - 1].name, "cid_ce");
    }

    #[test]
    fn every_schema_requires_left_and_right() {
        for schema in export_tool_schemas() {
            let required = schema["function"]["parameters"]["required"]
                .as_array()
                .unwrap();
            assert!(required.contains(&json!("left")), "{schema}");
            assert!(required.contains(&json!("right")), "{schema}");
            assert_eq!(schema["type"], "function");
        }
    }

    #[test]
    fn schemas_round_trip_through_text() {
        let text = serde_json::to_string(&export_tool_schemas()).unwrap();
        let parsed: Vec<Value> = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.len(), TOOL_COUNT);
    }

    #[test]
    fn dispatch_happy_path() {
        let series = demo_series();
        let obs = dispatch(&series, "standard_deviation", &json!({"left": 0, "right": 10}));
        assert!(obs["value"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn dispatch_multi_field_payload() {
        let series = demo_series();
        let obs = dispatch(&series, "linear_trend", &json!({"left": 0, "right": 5}));
        let keys: Vec<&str> = obs.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, vec!["slope", "intercept", "rvalue", "pvalue", "stderr"]);
    }

    #[test]
    fn unknown_tool_is_reported() {
        let series = demo_series();
        let obs = dispatch(&series, "does_not_exist", &json!({"left": 0, "right": 3}));
        assert_eq!(obs["error"]["code"], "UNKNOWN_TOOL");
    }

    #[test]
    fn out_of_bounds_window_is_reported() {
        let series = demo_series();
        let obs = dispatch(&series, "standard_deviation", &json!({"left": 0, "right": 99}));
        assert_eq!(obs["error"]["code"], "OUT_OF_BOUNDS");
        let backwards = dispatch(&series, "standard_deviation", &json!({"left": 5, "right": 2}));
        assert_eq!(backwards["error"]["code"], "OUT_OF_BOUNDS");
    }

    #[test]
    fn missing_and_unexpected_arguments_rejected() {
        let series = demo_series();
        let missing = dispatch(&series, "quantile", &json!({"left": 0, "right": 5}));
        assert_eq!(missing["error"]["code"], "BAD_PARAM");
        let extra = dispatch(
            &series,
            "standard_deviation",
            &json!({"left": 0, "right": 5, "smooth": true}),
        );
        assert_eq!(extra["error"]["code"], "BAD_PARAM");
        assert!(extra["error"]["message"].as_str().unwrap().contains("smooth"));
    }

    #[test]
    fn error_records_carry_no_payload() {
        let series = Series::new(vec![f64::NAN, f64::NAN]).unwrap();
        let obs = dispatch(&series, "standard_deviation", &json!({"left": 0, "right": 2}));
        let map = obs.as_object().unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(obs["error"]["code"], "ALL_MISSING");
    }

    #[test]
    fn wire_invocation_round_trip() {
        let series = demo_series();
        let invocation: ToolInvocation = serde_json::from_str(
            r#"{"call_id": "quantile:1", "name": "quantile", "arguments": {"left": 0, "right": 10, "q": 0.5}}"#,
        )
        .unwrap();
        let obs = respond(&series, &invocation);
        assert_eq!(obs["value"].as_f64().unwrap(), 2.5);
    }

    #[test]
    fn integer_like_floats_accepted_for_indices() {
        let series = demo_series();
        let obs = dispatch(&series, "standard_deviation", &json!({"left": 0.0, "right": 10.0}));
        assert!(obs.get("value").is_some());
    }
}
