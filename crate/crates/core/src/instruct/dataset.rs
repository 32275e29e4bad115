use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    mix_dataset, render, template_for, DatasetManifest, InstructionRecord, MixError, Scenario,
    TaskKind,
};
use crate::black_start::GAConfig;
use crate::grid::GridCase;
use crate::scenario::{
    generate_adjustment, generate_black_start, generate_monitoring, generate_snapshot,
    ScenarioConfig, SkippedScenario,
};

/// Task of global sample index `i` is `TASK_ROTATION[i % 5]`.
pub const TASK_ROTATION: [TaskKind; 5] = [
    TaskKind::OperationAdjustment,
    TaskKind::OperationMonitoring,
    TaskKind::BlackStart,
    TaskKind::VoltageBoundary,
    TaskKind::GenerationCost,
];

/// Give up when this many attempts per requested record have been made.
const MAX_ATTEMPTS_PER_RECORD: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetConfig {
    pub scenario: ScenarioConfig,
    pub ga: GAConfig,
    pub dispatch_fraction: f64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            scenario: ScenarioConfig::default(),
            ga: GAConfig::default(),
            dispatch_fraction: 0.85,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispatchRecords {
    pub records: Vec<InstructionRecord>,
    pub skipped: Vec<SkippedScenario>,
    /// Sample indices consumed, produced or skipped.
    pub attempts: u64,
}

fn generate_one(
    cases: &[GridCase],
    cfg: &DatasetConfig,
    index: u64,
) -> Result<InstructionRecord, SkippedScenario> {
    let task = TASK_ROTATION[(index % 5) as usize];
    let case = &cases[((index / 5) % cases.len() as u64) as usize];
    let sc = &cfg.scenario;
    let scenario = match task {
        TaskKind::OperationAdjustment => {
            Scenario::Adjustment(generate_adjustment(case, sc, index)?)
        }
        TaskKind::OperationMonitoring => {
            Scenario::Monitoring(generate_monitoring(case, sc, index)?)
        }
        TaskKind::BlackStart => {
            Scenario::BlackStart(generate_black_start(case, sc, &cfg.ga, index)?)
        }
        TaskKind::VoltageBoundary => Scenario::VoltageBoundary(generate_snapshot(case, sc, index)?),
        TaskKind::GenerationCost => Scenario::GenerationCost(generate_snapshot(case, sc, index)?),
        TaskKind::Knowledge => unreachable!("not in the rotation"),
    };
    let template = template_for(task).expect("dispatch tasks have templates");
    Ok(render(template, case, &scenario, sc.seed).expect("template matches its task"))
}

/// Renders `count` dispatch records from consecutive sample indices.
///
/// Blocks of five consecutive indices share a case, cycling through
/// `cases`. Skipped indices are recorded and replaced by later ones.
pub fn build_dispatch_records(
    cases: &[GridCase],
    cfg: &DatasetConfig,
    count: usize,
) -> Result<DispatchRecords, MixError> {
    assert!(!cases.is_empty(), "at least one case");
    let mut records = Vec::with_capacity(count);
    let mut skipped = Vec::new();
    let mut next = 0u64;
    let limit = (count * MAX_ATTEMPTS_PER_RECORD) as u64;
    while records.len() < count {
        let need = (count - records.len()) as u64;
        if next + need > limit {
            return Err(MixError::InsufficientRecords {
                part: "dispatch",
                needed: count,
                available: records.len(),
            });
        }
        let batch: Vec<_> = (next..next + need)
            .into_par_iter()
            .map(|i| generate_one(cases, cfg, i))
            .collect();
        next += need;
        for r in batch {
            match r {
                Ok(rec) => records.push(rec),
                Err(s) => skipped.push(s),
            }
        }
    }
    Ok(DispatchRecords {
        records,
        skipped,
        attempts: next,
    })
}

/// Renders `round(fraction · total)` dispatch records and mixes them with
/// `knowledge` into exactly `total` records.
///
/// Knowledge records are renumbered after the dispatch sample indices and
/// stamped with the run seed so `(seed, sample_index)` stays unique.
pub fn build_dataset(
    cases: &[GridCase],
    knowledge: Vec<InstructionRecord>,
    cfg: &DatasetConfig,
    total: usize,
) -> Result<(Vec<InstructionRecord>, DatasetManifest), MixError> {
    let fraction = cfg.dispatch_fraction;
    if !(0.0..=1.0).contains(&fraction) {
        return Err(MixError::InvalidFraction(fraction));
    }
    let want = (fraction * total as f64).round() as usize;
    let dispatch = if want > 0 {
        build_dispatch_records(cases, cfg, want)?
    } else {
        DispatchRecords {
            records: Vec::new(),
            skipped: Vec::new(),
            attempts: 0,
        }
    };
    let seed = cfg.scenario.seed;
    let knowledge = knowledge
        .into_iter()
        .enumerate()
        .map(|(j, mut r)| {
            r.meta.seed = seed;
            r.meta.sample_index = dispatch.attempts + j as u64;
            r
        })
        .collect();
    let (records, mut manifest) =
        mix_dataset(dispatch.records, knowledge, fraction, Some(total), seed)?;
    manifest.skipped = dispatch.skipped;
    manifest.fitness_weights = Some(cfg.ga.weights);
    Ok((records, manifest))
}
