use serde::{Deserialize, Serialize};

use super::{draw_loads, scenario_stream, LoadSample, ScenarioConfig, SkippedScenario};
use crate::dispatch::{relieve_overloads, solve_operating_point, DispatchError, OperatingPoint};
use crate::grid::{BusId, GridCase};
use crate::power_flow::{loading_ratios, rank_by_loading, PowerFlowError};

/// Ratings at or above this value (and zero) mean "no limit" in case files.
pub const UNLIMITED_RATING_MVA: f64 = 9900.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedLine {
    /// 0-based branch index
    pub branch: usize,
    pub from_bus: BusId,
    pub to_bus: BusId,
    pub pre_loading: f64,
    /// Larger end flow before the event, MVA.
    pub pre_flow_mva: f64,
    pub old_rate: f64,
    /// Capacity the reduction factor applies to: the rating, or the
    /// pre-event flow for unlimited branches.
    pub basis_rate: f64,
    pub new_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AdjustmentPost {
    Solved {
        point: Box<OperatingPoint>,
    },
    Diverged {
        iterations: usize,
        final_mismatch: f64,
    },
    Infeasible {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorAdjustment {
    /// 0-based generator index
    pub generator: usize,
    pub bus: BusId,
    pub pre_mw: f64,
    pub post_mw: f64,
    pub delta_mw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentScenario {
    pub case_name: String,
    pub index: u64,
    pub sample: LoadSample,
    pub pre: OperatingPoint,
    pub reduced_lines: Vec<ReducedLine>,
    pub post: AdjustmentPost,
    pub required_adjustments: Option<Vec<GeneratorAdjustment>>,
}

impl AdjustmentScenario {
    /// The sampled case with the reduced ratings applied.
    pub fn post_case(&self, case: &GridCase) -> GridCase {
        let mut out = self.sample.apply(case);
        for r in &self.reduced_lines {
            out.branches[r.branch].rate_mva = r.new_rate;
        }
        out
    }
}

/// Load sample, least-cost operating point, capacity cut on the most loaded
/// branches, and the corrective redispatch that relieves the resulting
/// overloads.
pub fn generate_adjustment(
    case: &GridCase,
    cfg: &ScenarioConfig,
    index: u64,
) -> Result<AdjustmentScenario, SkippedScenario> {
    let mut rng = scenario_stream(cfg, index);
    let sample = draw_loads(case, cfg, &mut rng);
    let sampled = sample.apply(case);
    let pre = solve_operating_point(&sampled, &cfg.pf)
        .map_err(|e| SkippedScenario::from_dispatch(index, &e))?;

    let ratios = loading_ratios(&sampled, &pre.solution);
    let ranked = rank_by_loading(&sampled, &ratios);
    if ranked.len() < cfg.top_k_lines {
        return Err(SkippedScenario {
            index,
            reason: format!(
                "only {} in-service branches for {} reductions",
                ranked.len(),
                cfg.top_k_lines
            ),
        });
    }
    let (lo, hi) = cfg.reduction_range;
    let mut post_case = sampled.clone();
    let reduced_lines: Vec<ReducedLine> = ranked[..cfg.top_k_lines]
        .iter()
        .map(|&k| {
            let br = &sampled.branches[k];
            let flow = pre.solution.branch_from_flow[k]
                .norm()
                .max(pre.solution.branch_to_flow[k].norm());
            let unlimited = br.rate_mva <= 0.0 || br.rate_mva >= UNLIMITED_RATING_MVA;
            let basis_rate = if unlimited { flow } else { br.rate_mva };
            let new_rate = basis_rate * rng.uniform(lo, hi);
            post_case.branches[k].rate_mva = new_rate;
            ReducedLine {
                branch: k,
                from_bus: br.from_bus,
                to_bus: br.to_bus,
                pre_loading: ratios[k],
                pre_flow_mva: flow,
                old_rate: br.rate_mva,
                basis_rate,
                new_rate,
            }
        })
        .collect();

    let event = OperatingPoint::from_parts(
        &post_case,
        pre.generators.clone(),
        pre.dispatch.clone(),
        pre.solution.clone(),
    );
    let (post, required_adjustments) = match relieve_overloads(&post_case, &event, &cfg.pf) {
        Ok(point) => {
            let adj = pre
                .generators
                .iter()
                .enumerate()
                .map(|(j, &g)| GeneratorAdjustment {
                    generator: g,
                    bus: case.generators[g].bus,
                    pre_mw: pre.dispatch.p_out[j],
                    post_mw: point.dispatch.p_out[j],
                    delta_mw: point.dispatch.p_out[j] - pre.dispatch.p_out[j],
                })
                .collect();
            (
                AdjustmentPost::Solved {
                    point: Box::new(point),
                },
                Some(adj),
            )
        }
        Err(DispatchError::PowerFlow(PowerFlowError::Diverged {
            iterations,
            final_mismatch,
        })) => (
            AdjustmentPost::Diverged {
                iterations,
                final_mismatch,
            },
            None,
        ),
        Err(e) => (
            AdjustmentPost::Infeasible {
                reason: e.to_string(),
            },
            None,
        ),
    };
    Ok(AdjustmentScenario {
        case_name: case.name.clone(),
        index,
        sample,
        pre,
        reduced_lines,
        post,
        required_adjustments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispatch::overloaded_branches;
    use crate::grid::bundled;

    #[test]
    fn reductions_follow_loading_order() {
        let case = bundled::case30();
        let s = generate_adjustment(
            &case,
            &ScenarioConfig {
                seed: 4,
                ..Default::default()
            },
            0,
        )
        .unwrap();
        assert_eq!(s.reduced_lines.len(), 3);
        assert!(s
            .reduced_lines
            .windows(2)
            .all(|w| w[0].pre_loading >= w[1].pre_loading));
        for r in &s.reduced_lines {
            assert!(
                r.new_rate >= 0.5 * r.basis_rate - 1e-9 && r.new_rate <= 0.9 * r.basis_rate + 1e-9
            );
        }
    }

    #[test]
    fn no_op_reduction_needs_no_adjustment() {
        let case = bundled::case14();
        let cfg = ScenarioConfig {
            seed: 42,
            reduction_range: (1.0, 1.0),
            ..Default::default()
        };
        let s = generate_adjustment(&case, &cfg, 0).unwrap();
        for adj in s.required_adjustments.unwrap() {
            assert!(adj.delta_mw.abs() < 0.5, "{adj:?}");
        }
    }

    #[test]
    fn reduced_lines_get_relieved_on_case14() {
        let case = bundled::case14();
        let cfg = ScenarioConfig {
            seed: 42,
            ..Default::default()
        };
        let s = generate_adjustment(&case, &cfg, 0).unwrap();
        let AdjustmentPost::Solved { point } = &s.post else {
            panic!("{:?}", s.post)
        };
        let moved: f64 = s
            .required_adjustments
            .as_ref()
            .unwrap()
            .iter()
            .map(|a| a.delta_mw.abs())
            .sum();
        assert!(moved > 1.0);
        assert!(overloaded_branches(point).len() <= s.reduced_lines.len());
    }

    #[test]
    fn reruns_are_byte_identical() {
        let case = bundled::case14();
        let cfg = ScenarioConfig {
            seed: 42,
            ..Default::default()
        };
        let a = serde_json::to_string(&generate_adjustment(&case, &cfg, 0).unwrap()).unwrap();
        let b = serde_json::to_string(&generate_adjustment(&case, &cfg, 0).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
