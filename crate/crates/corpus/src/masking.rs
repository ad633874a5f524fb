//! Seeded metadata masking.
//!
//! A fixed fraction of each dataset's samples is rewritten so that every
//! metadata field reads `unavailable` and the masked flag is set. Selection
//! depends only on the seed, the dataset name, and the dataset's sample
//! count, so reruns and input reordering cannot change which samples are
//! hidden.

use std::collections::BTreeMap;

use morphocast_series::Metadata;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::error::CorpusError;
use crate::manifest::CorpusSample;

/// Fraction of each dataset masked by default.
pub const DEFAULT_MASK_FRACTION: f64 = 0.30;

/// Masks `floor(fraction * count)` samples per dataset in place and returns
/// how many samples are masked afterwards.
///
/// Masking replaces the whole metadata block with `unavailable` literals and
/// sets `metadata_masked`; timestamp bounds stay on the sample but the
/// masked prompt variant never shows them. Re-running with the same seed
/// picks the same samples, so masking is idempotent.
pub fn mask_metadata(
    samples: &mut [CorpusSample],
    fraction: f64,
    seed: u64,
) -> Result<usize, CorpusError> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(CorpusError::BadConfig(format!(
            "mask fraction must lie in [0, 1], got {fraction}"
        )));
    }

    let mut by_dataset: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (position, sample) in samples.iter().enumerate() {
        by_dataset
            .entry(sample.dataset.as_str())
            .or_default()
            .push(position);
    }

    let mut chosen = Vec::new();
    for (dataset, positions) in &by_dataset {
        let quota = (fraction * positions.len() as f64).floor() as usize;
        let mut rng = dataset_rng(seed, dataset);
        let picks = rand::seq::index::sample(&mut rng, positions.len(), quota);
        chosen.extend(picks.iter().map(|local| positions[local]));
    }

    for position in chosen {
        let sample = &mut samples[position];
        sample.context.metadata = Metadata::unavailable();
        sample.context.metadata_masked = true;
    }
    Ok(samples.iter().filter(|s| s.context.metadata_masked).count())
}

/// One stream per (seed, dataset) pair: the dataset name is hashed into the
/// seed so adding a dataset never shifts another dataset's selection.
fn dataset_rng(seed: u64, dataset: &str) -> ChaCha20Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(dataset.as_bytes());
    ChaCha20Rng::from_seed(hasher.finalize().into())
}
