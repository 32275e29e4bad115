//! Economic dispatch and the sequential dispatch/power-flow operating point.
//!
//! [`solve_operating_point`] approximates an AC-OPF by alternating lambda
//! iteration with a Newton power flow: losses found by the power flow are
//! folded back into the dispatched demand until the slack unit's output
//! stays within 0.5 MW of its dispatched value. Branch ratings and voltage
//! limits are checked afterwards and reported as [`Violation`]s; they do not
//! enter the optimization.

mod corrective;
mod economic;
mod voltage;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use corrective::{overloaded_branches, relieve_overloads};
pub use economic::{lambda_iteration, Binding, DispatchResult};
pub use voltage::{
    voltage_boundary_report, BusVoltageStatus, ThresholdError, VoltageStatus, VoltageThresholds,
};

use crate::grid::{BusId, BusKind, GridCase};
use crate::power_flow::{loading_ratios, solve_nr, PFOptions, PowerFlowError, PowerFlowSolution};

/// Method tag written into dataset manifests.
pub const OPF_METHOD: &str = "sequential_ed_pf";

const LOSS_ALLOWANCE: f64 = 0.02;
const SLACK_TOLERANCE_MW: f64 = 0.5;
const MAX_OUTER_ITERATIONS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum DispatchError {
    #[error(
        "demand {demand:.4} MW outside dispatchable range [{min_total:.4}, {max_total:.4}] MW"
    )]
    Infeasible {
        demand: f64,
        min_total: f64,
        max_total: f64,
    },
    #[error("generator {0} is online but has no cost curve")]
    MissingCost(usize),
    #[error(transparent)]
    PowerFlow(#[from] PowerFlowError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    LineOverload,
    VoltageHigh,
    VoltageLow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    Branch {
        index: usize,
        from: BusId,
        to: BusId,
    },
    Bus {
        id: BusId,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub element: Element,
    pub kind: ViolationKind,
    /// Loading ratio for overloads; p.u. distance past the limit for voltages.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// Indices into `GridCase::generators` matching `dispatch.p_out`.
    pub generators: Vec<usize>,
    pub dispatch: DispatchResult,
    pub solution: PowerFlowSolution,
    pub violations: Vec<Violation>,
    pub outer_iterations: usize,
}

impl OperatingPoint {
    /// Builds a point for an already solved network.
    pub fn from_parts(
        case: &GridCase,
        generators: Vec<usize>,
        dispatch: DispatchResult,
        solution: PowerFlowSolution,
    ) -> Self {
        let violations = find_violations(case, &solution);
        OperatingPoint {
            generators,
            dispatch,
            solution,
            violations,
            outer_iterations: 0,
        }
    }

    pub fn total_generation(&self) -> f64 {
        self.dispatch.p_out.iter().sum()
    }
}

/// Every branch above its rating and every energized bus outside
/// `[v_min, v_max]`, branches first.
pub fn find_violations(case: &GridCase, sol: &PowerFlowSolution) -> Vec<Violation> {
    let mut out = Vec::new();
    for (k, ratio) in loading_ratios(case, sol).into_iter().enumerate() {
        if ratio > 1.0 {
            let br = &case.branches[k];
            out.push(Violation {
                element: Element::Branch {
                    index: k,
                    from: br.from_bus,
                    to: br.to_bus,
                },
                kind: ViolationKind::LineOverload,
                magnitude: ratio,
            });
        }
    }
    for (i, bus) in case.buses.iter().enumerate() {
        if !sol.energized[i] {
            continue;
        }
        let v = sol.v_mag[i];
        if v > bus.v_max {
            out.push(Violation {
                element: Element::Bus { id: bus.id },
                kind: ViolationKind::VoltageHigh,
                magnitude: v - bus.v_max,
            });
        } else if v < bus.v_min {
            out.push(Violation {
                element: Element::Bus { id: bus.id },
                kind: ViolationKind::VoltageLow,
                magnitude: bus.v_min - v,
            });
        }
    }
    out
}

/// Copy of `case` with the dispatched outputs written onto its generators.
pub fn apply_dispatch(
    case: &GridCase,
    generators: &[usize],
    dispatch: &DispatchResult,
) -> GridCase {
    let mut out = case.clone();
    for (&g, &p) in generators.iter().zip(&dispatch.p_out) {
        out.generators[g].p_out = p;
    }
    out
}

/// Least-cost dispatch coupled with AC power flow and slack feedback.
pub fn solve_operating_point(
    case: &GridCase,
    opts: &PFOptions,
) -> Result<OperatingPoint, DispatchError> {
    let generators = case.online_generators();
    let mut costs = Vec::with_capacity(generators.len());
    for &g in &generators {
        costs.push(
            case.cost_of(g)
                .cloned()
                .ok_or(DispatchError::MissingCost(g))?,
        );
    }
    let limits: Vec<(f64, f64)> = generators
        .iter()
        .map(|&g| (case.generators[g].p_min, case.generators[g].p_max))
        .collect();
    let idx = case.bus_index();
    let on_slack: Vec<bool> = generators
        .iter()
        .map(|&g| case.buses[idx.of(case.generators[g].bus)].kind == BusKind::Slack)
        .collect();

    let demand = case.total_p_demand();
    let mut losses = LOSS_ALLOWANCE * demand;
    let mut outer = 0;
    loop {
        outer += 1;
        let dispatch = lambda_iteration(&costs, &limits, demand + losses)?;
        let solved_case = apply_dispatch(case, &generators, &dispatch);
        let solution = solve_nr(&solved_case, opts)?;
        let dispatched_slack: f64 = dispatch
            .p_out
            .iter()
            .zip(&on_slack)
            .filter(|(_, &s)| s)
            .map(|(p, _)| p)
            .sum();
        let deviation = solution.p_slack - dispatched_slack;
        if deviation.abs() < SLACK_TOLERANCE_MW || outer >= MAX_OUTER_ITERATIONS {
            let mut op = OperatingPoint::from_parts(&solved_case, generators, dispatch, solution);
            op.outer_iterations = outer;
            return Ok(op);
        }
        losses += deviation;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::testing::{generator, two_bus};
    use crate::grid::{bundled, CostCurve};

    #[test]
    fn two_bus_single_generator_covers_load_and_losses() {
        let case = two_bus(10.0);
        let op = solve_operating_point(&case, &PFOptions::default()).unwrap();
        let losses = op.solution.total_losses();
        assert!((op.dispatch.p_out[0] - (10.0 + losses)).abs() < 0.5);
        assert!(op.violations.is_empty());
    }

    #[test]
    fn excess_demand_is_infeasible() {
        let case = two_bus(500.0);
        assert!(matches!(
            solve_operating_point(&case, &PFOptions::default()),
            Err(DispatchError::Infeasible { .. })
        ));
    }

    #[test]
    fn case14_closes_active_balance() {
        let case = bundled::case14();
        let op = solve_operating_point(&case, &PFOptions::default()).unwrap();
        let gap = op.total_generation() - case.total_p_demand() - op.solution.total_losses();
        assert!(gap.abs() < 0.5, "gap {gap}");
    }

    #[test]
    fn missing_cost_is_reported() {
        let mut case = two_bus(10.0);
        case.generators.push(generator(2, 50.0));
        assert_eq!(
            solve_operating_point(&case, &PFOptions::default()).unwrap_err(),
            DispatchError::MissingCost(1)
        );
        case.cost_curves.push(CostCurve {
            generator_index: 1,
            c2: 0.0,
            c1: 5.0,
            c0: 0.0,
        });
        assert!(solve_operating_point(&case, &PFOptions::default()).is_ok());
    }

    #[test]
    fn violations_match_limits_exactly() {
        let mut case = bundled::case30();
        let op = solve_operating_point(&case, &PFOptions::default()).unwrap();
        let ratios = loading_ratios(&case, &op.solution);
        // Tighten the most loaded branch below its flow.
        let (k, _) = ratios
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        case.branches[k].rate_mva *= ratios[k] * 0.5;
        let v = find_violations(&case, &op.solution);
        let overloads: Vec<_> = v
            .iter()
            .filter(|v| v.kind == ViolationKind::LineOverload)
            .collect();
        assert!(overloads
            .iter()
            .any(|o| matches!(o.element, Element::Branch { index, .. } if index == k)));
        for viol in &v {
            match viol.element {
                Element::Branch { index, .. } => {
                    assert!(loading_ratios(&case, &op.solution)[index] > 1.0)
                }
                Element::Bus { id } => {
                    let i = case.bus_index().of(id);
                    let b = &case.buses[i];
                    assert!(op.solution.v_mag[i] > b.v_max || op.solution.v_mag[i] < b.v_min);
                }
            }
        }
    }
}
