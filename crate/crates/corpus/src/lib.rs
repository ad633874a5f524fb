//! Corpus construction for the forecasting agent.
//!
//! Turns a manifest of raw series into budgeted (history, future) windows,
//! masks metadata on a seeded fraction of samples, drives rollouts over the
//! windows, and filters the results through three judge checks with retries.

mod error;
mod manifest;
mod masking;
mod pipeline;
mod qc;
mod windowing;

pub use error::CorpusError;
pub use manifest::{
    materialize_windows, read_samples, write_samples, CorpusSample, Manifest, ManifestDataset,
    ManifestSeries, MetadataPatch,
};
pub use masking::{mask_metadata, DEFAULT_MASK_FRACTION};
pub use pipeline::{
    pipeline_run, write_qc_records, DatasetCounts, PipelineOutcome, PipelineReport, QcRecord,
    SampleReport, QC_MAX_RETRIES,
};
pub use qc::{run_qc, JudgeSettings, QcCheck, QcVerdict};
pub use windowing::{
    generate_windows, generate_windows_detailed, BudgetOutcome, WindowBudgetConfig, WindowKind,
    WindowSpec, WindowingResult,
};
