use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{InstructionRecord, TaskKind, TEMPLATE_VERSION};
use crate::black_start::FitnessWeights;
use crate::dispatch::OPF_METHOD;
use crate::rng::{Family, Substream, RNG_ALGORITHM};
use crate::scenario::SkippedScenario;

pub const TOKEN_ESTIMATOR: &str = "ceil(chars / 4); input counts instruction and input";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixError {
    #[error("dispatch fraction must lie in [0, 1], got {0}")]
    InvalidFraction(f64),
    #[error("{part} stream has {available} records, {needed} needed")]
    InsufficientRecords {
        part: &'static str,
        needed: usize,
        available: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PartStats {
    pub records: usize,
    pub mean_input_tokens: f64,
    pub mean_output_tokens: f64,
}

impl PartStats {
    pub fn of<'a>(records: impl IntoIterator<Item = &'a InstructionRecord>) -> Self {
        let (mut n, mut i, mut o) = (0usize, 0usize, 0usize);
        for r in records {
            n += 1;
            i += r.input_tokens();
            o += r.output_tokens();
        }
        let mean = |x: usize| if n == 0 { 0.0 } else { x as f64 / n as f64 };
        PartStats {
            records: n,
            mean_input_tokens: mean(i),
            mean_output_tokens: mean(o),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenStats {
    pub dispatch: PartStats,
    pub knowledge: PartStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub total: usize,
    pub counts: BTreeMap<TaskKind, usize>,
    pub target_fraction: f64,
    pub dispatch_fraction: f64,
    pub tokens: TokenStats,
    pub token_estimator: String,
    pub seed: u64,
    pub opf_method: String,
    pub rng_algorithm: String,
    pub template_version: String,
    pub fitness_weights: Option<FitnessWeights>,
    pub skipped: Vec<SkippedScenario>,
    /// SHA-256 of every input file, keyed by name.
    pub fixture_hashes: BTreeMap<String, String>,
}

impl DatasetManifest {
    /// Counts and token statistics of an emitted record set.
    pub fn describe(records: &[InstructionRecord], target_fraction: f64, seed: u64) -> Self {
        let mut counts = BTreeMap::new();
        for r in records {
            *counts.entry(r.meta.task).or_insert(0) += 1;
        }
        let dispatch = PartStats::of(records.iter().filter(|r| r.meta.task.is_dispatch()));
        let knowledge = PartStats::of(records.iter().filter(|r| !r.meta.task.is_dispatch()));
        let total = records.len();
        DatasetManifest {
            total,
            counts,
            target_fraction,
            dispatch_fraction: if total == 0 {
                0.0
            } else {
                dispatch.records as f64 / total as f64
            },
            tokens: TokenStats {
                dispatch,
                knowledge,
            },
            token_estimator: TOKEN_ESTIMATOR.into(),
            seed,
            opf_method: OPF_METHOD.into(),
            rng_algorithm: RNG_ALGORITHM.into(),
            template_version: TEMPLATE_VERSION.into(),
            fitness_weights: None,
            skipped: Vec::new(),
            fixture_hashes: BTreeMap::new(),
        }
    }

    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(self).expect("manifests serialize")
    }
}

fn quota(fraction: f64, total: usize) -> usize {
    (fraction * total as f64).round() as usize
}

/// Largest total whose quotas both streams can fill.
fn max_total(fraction: f64, dispatch: usize, knowledge: usize) -> usize {
    (0..=dispatch + knowledge)
        .rev()
        .find(|&t| quota(fraction, t) <= dispatch && t - quota(fraction, t) <= knowledge)
        .unwrap_or(0)
}

/// Takes `round(fraction · total)` leading dispatch records and the rest
/// from the leading knowledge records, then shuffles the union with the
/// `(seed, Mixing, 0)` substream.
///
/// Without `total` the largest total both streams support is used.
pub fn mix_dataset(
    dispatch: Vec<InstructionRecord>,
    knowledge: Vec<InstructionRecord>,
    fraction: f64,
    total: Option<usize>,
    seed: u64,
) -> Result<(Vec<InstructionRecord>, DatasetManifest), MixError> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(MixError::InvalidFraction(fraction));
    }
    let total = total.unwrap_or_else(|| max_total(fraction, dispatch.len(), knowledge.len()));
    let d = quota(fraction, total);
    let k = total - d;
    if d > dispatch.len() {
        return Err(MixError::InsufficientRecords {
            part: "dispatch",
            needed: d,
            available: dispatch.len(),
        });
    }
    if k > knowledge.len() {
        return Err(MixError::InsufficientRecords {
            part: "knowledge",
            needed: k,
            available: knowledge.len(),
        });
    }
    let mut out: Vec<InstructionRecord> = dispatch
        .into_iter()
        .take(d)
        .chain(knowledge.into_iter().take(k))
        .collect();
    Substream::new(seed, Family::Mixing, 0).shuffle(&mut out);
    let manifest = DatasetManifest::describe(&out, fraction, seed);
    Ok((out, manifest))
}
