//! Monte Carlo operating scenarios.
//!
//! Every scenario is a pure function of `(case, config, index)`: its random
//! draws come from the substream `(config.seed, Scenario, index)`, taken in
//! a fixed order (per-bus load multipliers first, then whatever the
//! scenario kind needs). Batches run in parallel and are returned in index
//! order.

mod adjustment;
mod episodes;
mod monitoring;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use adjustment::{
    generate_adjustment, AdjustmentPost, AdjustmentScenario, GeneratorAdjustment, ReducedLine,
    UNLIMITED_RATING_MVA,
};
pub use episodes::{generate_black_start, generate_snapshot, BlackStartEpisode, OperatingSnapshot};
pub use monitoring::{generate_monitoring, MonitoringScenario, PostResult, SafetyLabel};

use crate::dispatch::{DispatchError, VoltageThresholds};
use crate::grid::GridCase;
use crate::power_flow::PFOptions;
use crate::rng::{Family, Substream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub seed: u64,
    /// Per-bus load multiplier bounds.
    pub load_range: (f64, f64),
    pub top_k_lines: usize,
    /// Post-reduction capacity as a fraction of the original rating.
    pub reduction_range: (f64, f64),
    /// Number of most loaded branches a monitoring outage is drawn from.
    pub disconnect_pool: usize,
    pub samples: usize,
    /// Bands used for the Safe/Unsafe label of monitoring scenarios.
    pub label_thresholds: VoltageThresholds,
    /// Bands reported in voltage-boundary snapshots.
    pub report_thresholds: VoltageThresholds,
    /// Black-start episodes draw each branch's restore time from `1..=restore_time_max`.
    pub restore_time_max: u32,
    pub pf: PFOptions,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 0,
            load_range: (0.8, 1.2),
            top_k_lines: 3,
            reduction_range: (0.5, 0.9),
            disconnect_pool: 3,
            samples: 100,
            label_thresholds: VoltageThresholds::new(0.90, 0.94, 1.06, 1.10).expect("ordered"),
            report_thresholds: VoltageThresholds::default(),
            restore_time_max: 5,
            pf: PFOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid scenario configuration: {}", .0.join("; "))]
pub struct ConfigError(pub Vec<String>);

impl ScenarioConfig {
    pub fn check(&self) -> Result<(), ConfigError> {
        let mut p = Vec::new();
        let (lo, hi) = self.load_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            p.push(format!(
                "load_range must satisfy 0 < lo <= hi, got ({lo}, {hi})"
            ));
        }
        let (rlo, rhi) = self.reduction_range;
        if !(rlo > 0.0 && rlo <= rhi && rhi <= 1.0) {
            p.push(format!(
                "reduction_range must satisfy 0 < lo <= hi <= 1, got ({rlo}, {rhi})"
            ));
        }
        if self.top_k_lines < 1 {
            p.push("top_k_lines must be at least 1".into());
        }
        if self.disconnect_pool < 1 {
            p.push("disconnect_pool must be at least 1".into());
        }
        if self.samples < 1 {
            p.push("samples must be at least 1".into());
        }
        if self.restore_time_max < 1 {
            p.push("restore_time_max must be at least 1".into());
        }
        if p.is_empty() {
            Ok(())
        } else {
            Err(ConfigError(p))
        }
    }
}

/// One load multiplier per bus, in bus order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadSample {
    pub multiplier: Vec<f64>,
}

impl LoadSample {
    /// Copy of `case` with each bus's P and Q demand scaled.
    pub fn apply(&self, case: &GridCase) -> GridCase {
        let mut out = case.clone();
        for (bus, m) in out.buses.iter_mut().zip(&self.multiplier) {
            bus.p_demand *= m;
            bus.q_demand *= m;
        }
        out
    }
}

/// A sample index that produced no scenario, with the reason.
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
#[error("scenario {index} skipped: {reason}")]
pub struct SkippedScenario {
    pub index: u64,
    pub reason: String,
}

impl SkippedScenario {
    pub(crate) fn from_dispatch(index: u64, err: &DispatchError) -> Self {
        SkippedScenario {
            index,
            reason: format!("pre-event state unsolvable: {err}"),
        }
    }
}

/// Scenario substream for a sample index.
pub fn scenario_stream(cfg: &ScenarioConfig, index: u64) -> Substream {
    Substream::new(cfg.seed, Family::Scenario, index)
}

pub(crate) fn draw_loads(case: &GridCase, cfg: &ScenarioConfig, rng: &mut Substream) -> LoadSample {
    let (lo, hi) = cfg.load_range;
    let multiplier = case
        .buses
        .iter()
        .map(|b| {
            let m = rng.uniform(lo, hi);
            if b.has_demand() {
                m
            } else {
                1.0
            }
        })
        .collect();
    LoadSample { multiplier }
}

/// Independent uniform multipliers on `cfg.load_range`; buses without
/// demand get exactly 1.
pub fn sample_loads(case: &GridCase, cfg: &ScenarioConfig, index: u64) -> LoadSample {
    draw_loads(case, cfg, &mut scenario_stream(cfg, index))
}

/// Runs `generate` for indices `0..cfg.samples` in parallel, in index order.
pub fn generate_batch<T, F>(cfg: &ScenarioConfig, generate: F) -> Vec<Result<T, SkippedScenario>>
where
    T: Send,
    F: Fn(u64) -> Result<T, SkippedScenario> + Sync + Send,
{
    (0..cfg.samples as u64)
        .into_par_iter()
        .map(generate)
        .collect()
}
