use serde::{Deserialize, Serialize};

use super::{draw_loads, scenario_stream, LoadSample, ScenarioConfig, SkippedScenario};
use crate::dispatch::{
    apply_dispatch, solve_operating_point, voltage_boundary_report, OperatingPoint, VoltageStatus,
    VoltageThresholds,
};
use crate::grid::{component_labels, BranchStatus, BusId, GridCase};
use crate::power_flow::{loading_ratios, rank_by_loading, solve_nr, PowerFlowError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SafetyLabel {
    Safe,
    Unsafe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PostResult {
    Converged {
        point: Box<OperatingPoint>,
    },
    Diverged {
        iterations: usize,
        final_mismatch: f64,
    },
    /// Buses with load but no generation after the outage.
    Islanded {
        buses: Vec<BusId>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitoringScenario {
    pub case_name: String,
    pub index: u64,
    pub sample: LoadSample,
    pub pre: OperatingPoint,
    /// Branch indices the outage was drawn from, most loaded first.
    pub pool: Vec<usize>,
    /// 0-based branch index
    pub disconnected_line: usize,
    pub disconnected_from: BusId,
    pub disconnected_to: BusId,
    pub islanded: bool,
    pub post_result: PostResult,
    /// Bands the label was judged against.
    pub thresholds: VoltageThresholds,
    /// Energized buses outside the critical band after the outage.
    pub critical_buses: Vec<BusId>,
    pub label: SafetyLabel,
}

/// Load buses in components that contain no online generator.
fn stranded_load_buses(case: &GridCase) -> Vec<BusId> {
    let (labels, count) = component_labels(case, true);
    let idx = case.bus_index();
    let mut has_gen = vec![false; count];
    for g in case.online_generators() {
        has_gen[labels[idx.of(case.generators[g].bus)]] = true;
    }
    case.buses
        .iter()
        .enumerate()
        .filter(|(i, b)| b.has_demand() && !has_gen[labels[*i]])
        .map(|(_, b)| b.id)
        .collect()
}

/// Load sample, pre-event operating point, random outage of one heavily
/// loaded branch, and a power flow at the unchanged dispatch.
///
/// The label is Safe only when the post-outage flow converges with no
/// energized bus in the critical band of `cfg.label_thresholds`.
pub fn generate_monitoring(
    case: &GridCase,
    cfg: &ScenarioConfig,
    index: u64,
) -> Result<MonitoringScenario, SkippedScenario> {
    let mut rng = scenario_stream(cfg, index);
    let sample = draw_loads(case, cfg, &mut rng);
    let sampled = sample.apply(case);
    let pre = solve_operating_point(&sampled, &cfg.pf)
        .map_err(|e| SkippedScenario::from_dispatch(index, &e))?;

    let ranked = rank_by_loading(&sampled, &loading_ratios(&sampled, &pre.solution));
    if ranked.is_empty() {
        return Err(SkippedScenario {
            index,
            reason: "no in-service branch to disconnect".into(),
        });
    }
    let pool: Vec<usize> = ranked.into_iter().take(cfg.disconnect_pool).collect();
    let line = pool[rng.below(pool.len())];

    let mut outaged = apply_dispatch(&sampled, &pre.generators, &pre.dispatch);
    outaged.branches[line].status = BranchStatus::Out;
    let stranded = stranded_load_buses(&outaged);
    let islanded = !stranded.is_empty();
    let post_result = if islanded {
        PostResult::Islanded { buses: stranded }
    } else {
        match solve_nr(&outaged, &cfg.pf) {
            Ok(sol) => PostResult::Converged {
                point: Box::new(OperatingPoint::from_parts(
                    &outaged,
                    pre.generators.clone(),
                    pre.dispatch.clone(),
                    sol,
                )),
            },
            Err(PowerFlowError::Diverged {
                iterations,
                final_mismatch,
            }) => PostResult::Diverged {
                iterations,
                final_mismatch,
            },
            Err(PowerFlowError::IslandedCase { buses }) => PostResult::Islanded { buses },
        }
    };
    let critical_buses: Vec<BusId> = match &post_result {
        PostResult::Converged { point } => voltage_boundary_report(point, &cfg.label_thresholds)
            .into_iter()
            .filter(|s| s.status == VoltageStatus::Critical)
            .map(|s| s.bus)
            .collect(),
        _ => Vec::new(),
    };
    let label = match post_result {
        PostResult::Converged { .. } if critical_buses.is_empty() => SafetyLabel::Safe,
        _ => SafetyLabel::Unsafe,
    };
    let br = &case.branches[line];
    Ok(MonitoringScenario {
        case_name: case.name.clone(),
        index,
        sample,
        pre,
        pool,
        disconnected_line: line,
        disconnected_from: br.from_bus,
        disconnected_to: br.to_bus,
        islanded,
        post_result,
        thresholds: cfg.label_thresholds,
        critical_buses,
        label,
    })
}
