use serde::{Deserialize, Serialize};

use super::{draw_loads, scenario_stream, LoadSample, ScenarioConfig, SkippedScenario};
use crate::black_start::{plan_black_start, GAConfig, RestorationPlan};
use crate::dispatch::{
    solve_operating_point, voltage_boundary_report, BusVoltageStatus, OperatingPoint,
    VoltageThresholds,
};
use crate::grid::GridCase;

/// Blackout of a sampled case with randomized line pick-up times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlackStartEpisode {
    pub case_name: String,
    pub index: u64,
    pub sample: LoadSample,
    /// Per branch, in branch order.
    pub restore_times: Vec<f64>,
    pub ga_seed: u64,
    pub plan: RestorationPlan,
}

impl BlackStartEpisode {
    pub fn episode_case(&self, case: &GridCase) -> GridCase {
        let mut out = self.sample.apply(case);
        for (br, &t) in out.branches.iter_mut().zip(&self.restore_times) {
            br.restore_time = t;
        }
        out
    }
}

/// Restore times are integers in `1..=cfg.restore_time_max`; the GA seed is
/// drawn after them from the same substream, overriding `ga.seed`.
pub fn generate_black_start(
    case: &GridCase,
    cfg: &ScenarioConfig,
    ga: &GAConfig,
    index: u64,
) -> Result<BlackStartEpisode, SkippedScenario> {
    let mut rng = scenario_stream(cfg, index);
    let sample = draw_loads(case, cfg, &mut rng);
    let restore_times: Vec<f64> = case
        .branches
        .iter()
        .map(|_| (1 + rng.below(cfg.restore_time_max as usize)) as f64)
        .collect();
    let ga_seed = rng.next_u64();
    let mut ecase = sample.apply(case);
    for (br, &t) in ecase.branches.iter_mut().zip(&restore_times) {
        br.restore_time = t;
    }
    let ga = GAConfig {
        seed: ga_seed,
        ..ga.clone()
    };
    let plan = plan_black_start(&ecase, &ga).map_err(|e| SkippedScenario {
        index,
        reason: format!("no restoration plan: {e}"),
    })?;
    Ok(BlackStartEpisode {
        case_name: case.name.clone(),
        index,
        sample,
        restore_times,
        ga_seed,
        plan,
    })
}

/// Sampled operating point with its voltage classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatingSnapshot {
    pub case_name: String,
    pub index: u64,
    pub sample: LoadSample,
    pub point: OperatingPoint,
    pub thresholds: VoltageThresholds,
    pub voltage: Vec<BusVoltageStatus>,
}

pub fn generate_snapshot(
    case: &GridCase,
    cfg: &ScenarioConfig,
    index: u64,
) -> Result<OperatingSnapshot, SkippedScenario> {
    let mut rng = scenario_stream(cfg, index);
    let sample = draw_loads(case, cfg, &mut rng);
    let point = solve_operating_point(&sample.apply(case), &cfg.pf)
        .map_err(|e| SkippedScenario::from_dispatch(index, &e))?;
    let voltage = voltage_boundary_report(&point, &cfg.report_thresholds);
    Ok(OperatingSnapshot {
        case_name: case.name.clone(),
        index,
        sample,
        point,
        thresholds: cfg.report_thresholds,
        voltage,
    })
}
