//! Manifest loading and window materialization.
//!
//! A manifest is a JSON document listing datasets, their series values, and
//! optional metadata sidecars. Materialization runs the window enumerator
//! over every series and slices out concrete samples: the agent-visible
//! context plus the held-out future values used for scoring and judging.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use morphocast_runtime::{nullable_floats, SampleContext};
use morphocast_series::Metadata;
use serde::{Deserialize, Serialize};

use crate::error::CorpusError;
use crate::windowing::{generate_windows_detailed, WindowBudgetConfig, WindowSpec, WindowingResult};

/// Partial metadata; unset fields fall back to the dataset-level patch and
/// finally to the `unavailable` literal.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetadataPatch {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_desc: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

impl MetadataPatch {
    fn apply(&self, target: &mut Metadata) {
        let fields = [
            (&self.dataset, &mut target.dataset),
            (&self.domain, &mut target.domain),
            (&self.freq, &mut target.freq),
            (&self.dataset_description, &mut target.dataset_description),
            (&self.var_name, &mut target.var_name),
            (&self.var_desc, &mut target.var_desc),
            (&self.unit, &mut target.unit),
        ];
        for (source, slot) in fields {
            if let Some(value) = source {
                *slot = value.clone();
            }
        }
    }
}

/// One raw series: values in time order, optional timestamps of equal
/// length, optional metadata overriding the dataset-level patch.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestSeries {
    pub id: String,
    #[serde(with = "nullable_floats")]
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamps: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<MetadataPatch>,
}

/// A named dataset with its series and an optional shared metadata patch.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDataset {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<MetadataPatch>,
    pub series: Vec<ManifestSeries>,
}

/// The corpus input: every dataset and series the windows are drawn from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub datasets: Vec<ManifestDataset>,
}

impl Manifest {
    pub fn from_str(text: &str) -> Result<Self, CorpusError> {
        let manifest: Manifest = serde_json::from_str(text)
            .map_err(|err| CorpusError::Malformed(format!("manifest: {err}")))?;
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        Self::from_str(&std::fs::read_to_string(path)?)
    }

    /// Checks naming and shape: non-empty unique dataset names, globally
    /// unique series ids, timestamps matching their values in length.
    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut dataset_names = HashSet::new();
        let mut series_ids = HashSet::new();
        for dataset in &self.datasets {
            if dataset.name.is_empty() {
                return Err(CorpusError::BadInput("dataset name is empty".into()));
            }
            if !dataset_names.insert(&dataset.name) {
                return Err(CorpusError::BadInput(format!(
                    "duplicate dataset name {:?}",
                    dataset.name
                )));
            }
            for series in &dataset.series {
                if series.id.is_empty() {
                    return Err(CorpusError::BadInput(format!(
                        "dataset {:?} has a series with an empty id",
                        dataset.name
                    )));
                }
                if !series_ids.insert(&series.id) {
                    return Err(CorpusError::BadInput(format!(
                        "duplicate series id {:?}",
                        series.id
                    )));
                }
                if let Some(stamps) = &series.timestamps {
                    if stamps.len() != series.values.len() {
                        return Err(CorpusError::BadInput(format!(
                            "series {:?}: {} timestamps for {} values",
                            series.id,
                            stamps.len(),
                            series.values.len()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One materialized window: the agent-visible context plus the held-out
/// future values and the provenance needed for masking and reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSample {
    /// Manifest dataset name; kept outside the metadata so masking cannot
    /// erase the grouping key.
    pub dataset: String,
    pub spec: WindowSpec,
    pub context: SampleContext,
    #[serde(with = "nullable_floats")]
    pub future_short: Vec<f64>,
    #[serde(with = "nullable_floats")]
    pub future_long: Vec<f64>,
}

/// Runs the window enumerator over the whole manifest and slices the
/// resulting windows into samples. Sample ids are `w0000`, `w0001`, ... in
/// generation order. Timestamp bounds are attached when the source series
/// carries timestamps.
pub fn materialize_windows(
    manifest: &Manifest,
    config: &WindowBudgetConfig,
) -> Result<Vec<CorpusSample>, CorpusError> {
    Ok(materialize_windows_detailed(manifest, config)?.0)
}

/// [`materialize_windows`] plus the budget branch taken during enumeration.
pub fn materialize_windows_detailed(
    manifest: &Manifest,
    config: &WindowBudgetConfig,
) -> Result<(Vec<CorpusSample>, WindowingResult), CorpusError> {
    manifest.validate()?;

    let mut sequences = Vec::new();
    let mut sources = std::collections::HashMap::new();
    for dataset in &manifest.datasets {
        for series in &dataset.series {
            sequences.push((series.id.clone(), series.values.len()));
            let mut metadata = Metadata::unavailable();
            metadata.dataset = dataset.name.clone();
            if let Some(patch) = &dataset.metadata {
                patch.apply(&mut metadata);
            }
            if let Some(patch) = &series.metadata {
                patch.apply(&mut metadata);
            }
            sources.insert(series.id.as_str(), (dataset.name.as_str(), series, metadata));
        }
    }

    let result = generate_windows_detailed(&sequences, config)?;
    let mut samples = Vec::with_capacity(result.windows.len());
    for (index, spec) in result.windows.iter().enumerate() {
        let (dataset_name, series, metadata) = &sources[spec.series_id.as_str()];
        samples.push(materialize_one(
            format!("w{index:04}"),
            dataset_name,
            spec,
            series,
            metadata.clone(),
        )?);
    }
    Ok((samples, result))
}

fn materialize_one(
    sample_id: String,
    dataset_name: &str,
    spec: &WindowSpec,
    series: &ManifestSeries,
    metadata: Metadata,
) -> Result<CorpusSample, CorpusError> {
    let slice = |start: usize, len: usize| series.values[start..start + len].to_vec();
    let history = slice(spec.hist_start, spec.hist_len);
    let future_short = slice(spec.future_short_start, spec.future_short_len);
    let future_long = slice(spec.future_long_start, spec.future_long_len);

    let mut context = SampleContext::new(
        sample_id,
        history,
        spec.future_short_len,
        spec.future_long_len,
        metadata,
        false,
    )?;

    if let Some(stamps) = &series.timestamps {
        let stamp = |index: usize| Some(stamps[index].clone());
        context.history_start = stamp(spec.hist_start);
        context.history_end = stamp(spec.hist_start + spec.hist_len - 1);
        context.future_short_start = stamp(spec.future_short_start);
        context.future_short_end = stamp(spec.future_short_start + spec.future_short_len - 1);
        context.future_long_start = stamp(spec.future_long_start);
        context.future_long_end = stamp(spec.future_long_start + spec.future_long_len - 1);
    }

    Ok(CorpusSample {
        dataset: dataset_name.to_string(),
        spec: spec.clone(),
        context,
        future_short,
        future_long,
    })
}

/// Writes samples as JSONL, one sample per line.
pub fn write_samples(writer: &mut dyn Write, samples: &[CorpusSample]) -> Result<(), CorpusError> {
    for sample in samples {
        let line = serde_json::to_string(sample)
            .map_err(|err| CorpusError::Malformed(format!("sample encode: {err}")))?;
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

/// Reads JSONL samples; blank lines are skipped, parse errors name the line.
pub fn read_samples(reader: impl std::io::Read) -> Result<Vec<CorpusSample>, CorpusError> {
    let mut samples = Vec::new();
    for (number, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let sample: CorpusSample = serde_json::from_str(&line).map_err(|err| {
            CorpusError::Malformed(format!("sample line {}: {err}", number + 1))
        })?;
        samples.push(sample);
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest_json() -> String {
        let values: Vec<String> = (0..30).map(|v| format!("{}.0", v)).collect();
        let stamps: Vec<String> = (0..30)
            .map(|i| format!("\"2024-01-{:02}\"", i + 1))
            .collect();
        format!(
            r#"{{
  "datasets": [
    {{
      "name": "grid",
      "metadata": {{"domain": "energy", "freq": "daily", "unit": "MW"}},
      "series": [
        {{"id": "grid-1", "values": [{values}], "timestamps": [{stamps}],
          "metadata": {{"var_name": "load"}}}}
      ]
    }},
    {{
      "name": "web",
      "series": [{{"id": "web-1", "values": [{values}]}}]
    }}
  ]
}}"#,
            values = values.join(", "),
            stamps = stamps.join(", ")
        )
    }

    fn small_config() -> WindowBudgetConfig {
        WindowBudgetConfig {
            history_len: 8,
            horizon_short: 2,
            horizon_long: 4,
            stride: 6,
            budget_cap: 100,
            budget_floor: 1,
            fallback_strides: vec![],
        }
    }

    #[test]
    fn materializes_contexts_futures_and_ids() {
        let manifest = Manifest::from_str(&manifest_json()).unwrap();
        let samples = materialize_windows(&manifest, &small_config()).unwrap();
        // Each 30-point series gives floor((30-8-4)/6)+1 = 4 sliding windows.
        assert_eq!(samples.len(), 8);
        let ids: Vec<&str> = samples.iter().map(|s| s.context.sample_id.as_str()).collect();
        assert_eq!(&ids[..3], &["w0000", "w0001", "w0002"]);
        assert_eq!(ids[7], "w0007");

        let first = &samples[0];
        assert_eq!(first.dataset, "grid");
        assert_eq!(first.context.history, (0..8).map(f64::from).collect::<Vec<_>>());
        assert_eq!(first.future_short, vec![8.0, 9.0]);
        assert_eq!(first.future_long, vec![8.0, 9.0, 10.0, 11.0]);
        assert_eq!(first.context.horizon_short, 2);
        assert_eq!(first.context.horizon_long, 4);
        assert!(!first.context.metadata_masked);
    }

    #[test]
    fn metadata_patches_layer_dataset_then_series() {
        let manifest = Manifest::from_str(&manifest_json()).unwrap();
        let samples = materialize_windows(&manifest, &small_config()).unwrap();
        let grid = &samples[0].context.metadata;
        assert_eq!(grid.dataset, "grid");
        assert_eq!(grid.domain, "energy");
        assert_eq!(grid.unit, "MW");
        assert_eq!(grid.var_name, "load");
        assert_eq!(grid.var_desc, "unavailable");

        let web = samples.iter().find(|s| s.dataset == "web").unwrap();
        assert_eq!(web.context.metadata.dataset, "web");
        assert_eq!(web.context.metadata.domain, "unavailable");
    }

    #[test]
    fn timestamp_bounds_cover_each_window_segment() {
        let manifest = Manifest::from_str(&manifest_json()).unwrap();
        let samples = materialize_windows(&manifest, &small_config()).unwrap();
        let second = &samples[1];
        assert_eq!(second.spec.hist_start, 6);
        assert_eq!(second.context.history_start.as_deref(), Some("2024-01-07"));
        assert_eq!(second.context.history_end.as_deref(), Some("2024-01-14"));
        assert_eq!(second.context.future_short_start.as_deref(), Some("2024-01-15"));
        assert_eq!(second.context.future_short_end.as_deref(), Some("2024-01-16"));
        assert_eq!(second.context.future_long_end.as_deref(), Some("2024-01-18"));

        let web = samples.iter().find(|s| s.dataset == "web").unwrap();
        assert!(web.context.history_start.is_none());
    }

    #[test]
    fn missing_values_survive_materialization_and_jsonl() {
        let manifest = Manifest::from_str(
            r#"{"datasets": [{"name": "d", "series": [
                {"id": "s", "values": [1.0, null, 3.0, 4.0, 5.0, 6.0, 7.0, null]}
            ]}]}"#,
        )
        .unwrap();
        let mut config = small_config();
        config.horizon_short = 1;
        config.horizon_long = 2;
        let samples = materialize_windows(&manifest, &config).unwrap();
        assert_eq!(samples.len(), 1);
        assert!(samples[0].context.history[1].is_nan());
        assert!(samples[0].future_long[1].is_nan());

        let mut buffer = Vec::new();
        write_samples(&mut buffer, &samples).unwrap();
        let back = read_samples(buffer.as_slice()).unwrap();
        assert_eq!(back.len(), 1);
        assert!(back[0].context.history[1].is_nan());
        assert!(back[0].future_long[1].is_nan());
        assert_eq!(back[0].spec, samples[0].spec);
    }

    #[test]
    fn rejects_duplicate_series_ids_and_bad_timestamps() {
        let dup = r#"{"datasets": [
            {"name": "a", "series": [{"id": "s", "values": [1.0]}]},
            {"name": "b", "series": [{"id": "s", "values": [1.0]}]}
        ]}"#;
        assert_eq!(Manifest::from_str(dup).unwrap_err().code(), "BAD_INPUT");

        let short = r#"{"datasets": [{"name": "a", "series": [
            {"id": "s", "values": [1.0, 2.0], "timestamps": ["t0"]}
        ]}]}"#;
        assert_eq!(Manifest::from_str(short).unwrap_err().code(), "BAD_INPUT");

        let unknown = r#"{"datasets": [], "extra": 1}"#;
        assert_eq!(
            Manifest::from_str(unknown).unwrap_err().code(),
            "MALFORMED_RECORD"
        );
    }

    #[test]
    fn read_samples_names_the_broken_line() {
        let err = read_samples("\n{broken\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}
