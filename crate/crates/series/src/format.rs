//! Compact numeric rendering for prompt serialization.

/// Renders one value with at most four significant digits.
///
/// Trailing zeros are trimmed; magnitudes outside `[1e-4, 1e7)` switch to
/// scientific notation; missing values render as `"nan"`. The encoding is
/// deterministic so prompts (and therefore cassette fingerprints) are stable.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-4..7).contains(&exp) {
        let s = format!("{v:.3e}");
        return trim_scientific(&s);
    }
    let decimals = (3 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    trim_fixed(&s)
}

/// Joins values with `", "` using [`format_value`].
pub fn format_values(values: &[f64]) -> String {
    values
        .iter()
        .map(|&v| format_value(v))
        .collect::<Vec<_>>()
        .join(", ")
}

fn trim_fixed(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

fn trim_scientific(s: &str) -> String {
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let m = trim_fixed(mantissa);
            format!("{m}e{exp}")
        }
        None => s.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_significant_digits() {
        assert_eq!(format_value(187.59662), "187.6");
        assert_eq!(format_value(0.47196), "0.472");
        assert_eq!(format_value(35.9497), "35.95");
        assert_eq!(format_value(1234567.0), "1234567");
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(format_value(1.5), "1.5");
        assert_eq!(format_value(2.0), "2");
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(-0.25), "-0.25");
    }

    #[test]
    fn scientific_for_extremes() {
        assert_eq!(format_value(1.5e-7), "1.5e-7");
        assert_eq!(format_value(2.5e9), "2.5e9");
    }

    #[test]
    fn missing_markers() {
        assert_eq!(format_value(f64::NAN), "nan");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn joined_list() {
        assert_eq!(
            format_values(&[1.0, f64::NAN, 2.5]),
            "1, nan, 2.5"
        );
    }
}
