//! CSV series ingestion and metadata sidecar parsing.
//!
//! The CSV layout is `series_id,timestamp,value` with a header row; an empty
//! value cell marks a missing observation. Rows for one series must be
//! contiguous and time-ordered. The sidecar is a JSON object keyed by
//! series id, each value a [`Metadata`] record.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::{Metadata, Series, SeriesError};

/// One ingested series with its id.
#[derive(Debug, Clone)]
pub struct NamedSeries {
    pub id: String,
    pub series: Series,
}

/// Reads all series from `series_id,timestamp,value` CSV data.
///
/// # Errors
/// Propagates CSV parse errors; `Invalid` for a malformed value cell, a
/// non-contiguous series block, or out-of-order timestamps.
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<NamedSeries>, SeriesError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut order: Vec<String> = Vec::new();
    let mut grouped: BTreeMap<String, (Vec<f64>, Vec<String>)> = BTreeMap::new();

    for record in rdr.records() {
        let record = record?;
        if record.len() < 3 {
            return Err(SeriesError::Invalid(format!(
                "expected 3 columns, got {}",
                record.len()
            )));
        }
        let id = record[0].to_string();
        let ts = record[1].to_string();
        let raw = record[2].trim();
        let value = if raw.is_empty() {
            f64::NAN
        } else {
            raw.parse::<f64>().map_err(|_| {
                SeriesError::Invalid(format!("unparseable value cell {raw:?} in series {id}"))
            })?
        };
        if !grouped.contains_key(&id) {
            order.push(id.clone());
        } else if order.last() != Some(&id) {
            return Err(SeriesError::Invalid(format!(
                "rows for series {id} are not contiguous"
            )));
        }
        let entry = grouped.entry(id).or_default();
        entry.0.push(value);
        entry.1.push(ts);
    }

    let mut out = Vec::with_capacity(order.len());
    for id in order {
        let (values, timestamps) = grouped.remove(&id).expect("grouped by construction");
        let series = Series::new(values)?.with_timestamps(timestamps)?;
        out.push(NamedSeries { id, series });
    }
    Ok(out)
}

/// [`read_csv`] from a path.
pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Vec<NamedSeries>, SeriesError> {
    let file = std::fs::File::open(path)?;
    read_csv(file)
}

/// Parses a metadata sidecar: a JSON object mapping series id to [`Metadata`].
pub fn read_sidecar<R: Read>(reader: R) -> Result<BTreeMap<String, Metadata>, SeriesError> {
    Ok(serde_json::from_reader(reader)?)
}

/// [`read_sidecar`] from a path.
pub fn read_sidecar_path(
    path: impl AsRef<Path>,
) -> Result<BTreeMap<String, Metadata>, SeriesError> {
    let file = std::fs::File::open(path)?;
    read_sidecar(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "series_id,timestamp,value\n\
                       a,2020-01-01,1.5\n\
                       a,2020-01-02,\n\
                       a,2020-01-03,2.5\n\
                       b,2020-01-01,7\n";

    #[test]
    fn parses_grouped_series() {
        let table = read_csv(CSV.as_bytes()).unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table[0].id, "a");
        let a = table[0].series.values();
        assert_eq!(a.len(), 3);
        assert_eq!(a[0], 1.5);
        assert!(a[1].is_nan());
        assert_eq!(a[2], 2.5);
        assert_eq!(table[1].series.values(), &[7.0]);
    }

    #[test]
    fn empty_cell_is_missing() {
        let table = read_csv(CSV.as_bytes()).unwrap();
        assert!(table[0].series.values()[1].is_nan());
    }

    #[test]
    fn non_contiguous_series_rejected() {
        let bad = "series_id,timestamp,value\na,1,1\nb,1,2\na,2,3\n";
        assert!(read_csv(bad.as_bytes()).is_err());
    }

    #[test]
    fn bad_value_cell_rejected() {
        let bad = "series_id,timestamp,value\na,1,oops\n";
        assert!(read_csv(bad.as_bytes()).is_err());
    }

    #[test]
    fn sidecar_round_trip() {
        let json = r#"{
            "a": {"dataset": "d", "domain": "Energy", "freq": "H",
                   "dataset_description": "demo", "var_name": "load",
                   "var_desc": "demand", "unit": "MW"}
        }"#;
        let side = read_sidecar(json.as_bytes()).unwrap();
        assert_eq!(side["a"].unit, "MW");
        assert!(!side["a"].is_fully_masked());
    }
}
