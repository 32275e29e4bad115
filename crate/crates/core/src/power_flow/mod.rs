//! AC power flow: admittance assembly, Newton-Raphson solution, branch
//! loading and the solution export document.

mod newton;
mod ybus;

use serde::Serialize;

pub use newton::{
    solve_nr, BusReactive, PFOptions, PowerFlowError, PowerFlowSolution, PvSwitch, QLimit,
};
pub use ybus::{build_ybus, AdmittanceMatrix};

use crate::grid::GridCase;

/// Apparent-power loading of each branch relative to its rating, in branch
/// order. Unrated branches (`rate_mva == 0`) report 0.
pub fn loading_ratios(case: &GridCase, sol: &PowerFlowSolution) -> Vec<f64> {
    case.branches
        .iter()
        .zip(sol.branch_from_flow.iter().zip(&sol.branch_to_flow))
        .map(|(br, (f, t))| {
            if br.rate_mva > 0.0 {
                f.norm().max(t.norm()) / br.rate_mva
            } else {
                0.0
            }
        })
        .collect()
}

/// Branch indices sorted by descending loading, ties by ascending index.
/// Only in-service branches are ranked.
pub fn rank_by_loading(case: &GridCase, ratios: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..case.branches.len())
        .filter(|&k| case.branches[k].in_service())
        .collect();
    order.sort_by(|&a, &b| ratios[b].total_cmp(&ratios[a]).then(a.cmp(&b)));
    order
}

#[derive(Debug, Serialize)]
pub struct BusRow {
    pub bus: u32,
    pub v_mag_pu: f64,
    pub v_ang_deg: f64,
}

#[derive(Debug, Serialize)]
pub struct BranchRow {
    pub branch: usize,
    pub from_bus: u32,
    pub to_bus: u32,
    pub p_from_mw: f64,
    pub q_from_mvar: f64,
    pub p_to_mw: f64,
    pub q_to_mvar: f64,
    pub loading: f64,
}

#[derive(Debug, Serialize)]
pub struct ConvergenceBlock {
    pub converged: bool,
    pub iterations: usize,
    pub max_mismatch_pu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_slack_mw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pv_to_pq: Vec<PvSwitch>,
}

/// Export form of a power-flow run: convergence block, bus voltages and
/// branch flows (1-based branch numbers).
#[derive(Debug, Serialize)]
pub struct SolutionDocument {
    pub case: String,
    pub convergence: ConvergenceBlock,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub buses: Vec<BusRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<BranchRow>,
}

impl SolutionDocument {
    pub fn new(case: &GridCase, result: &Result<PowerFlowSolution, PowerFlowError>) -> Self {
        match result {
            Ok(sol) => {
                let ratios = loading_ratios(case, sol);
                SolutionDocument {
                    case: case.name.clone(),
                    convergence: ConvergenceBlock {
                        converged: true,
                        iterations: sol.iterations,
                        max_mismatch_pu: sol.max_mismatch,
                        p_slack_mw: Some(sol.p_slack),
                        outcome: None,
                        pv_to_pq: sol.pv_switches.clone(),
                    },
                    buses: (0..sol.bus_ids.len())
                        .map(|i| BusRow {
                            bus: sol.bus_ids[i].0,
                            v_mag_pu: sol.v_mag[i],
                            v_ang_deg: sol.v_ang[i].to_degrees(),
                        })
                        .collect(),
                    branches: case
                        .branches
                        .iter()
                        .enumerate()
                        .map(|(k, br)| BranchRow {
                            branch: k + 1,
                            from_bus: br.from_bus.0,
                            to_bus: br.to_bus.0,
                            p_from_mw: sol.branch_from_flow[k].re,
                            q_from_mvar: sol.branch_from_flow[k].im,
                            p_to_mw: sol.branch_to_flow[k].re,
                            q_to_mvar: sol.branch_to_flow[k].im,
                            loading: ratios[k],
                        })
                        .collect(),
                }
            }
            Err(err) => {
                let (iterations, mismatch, outcome) = match err {
                    PowerFlowError::Diverged {
                        iterations,
                        final_mismatch,
                    } => (*iterations, *final_mismatch, "diverged".to_string()),
                    PowerFlowError::IslandedCase { .. } => {
                        (0, f64::NAN, format!("islanded: {err}"))
                    }
                };
                SolutionDocument {
                    case: case.name.clone(),
                    convergence: ConvergenceBlock {
                        converged: false,
                        iterations,
                        max_mismatch_pu: mismatch,
                        p_slack_mw: None,
                        outcome: Some(outcome),
                        pv_to_pq: Vec::new(),
                    },
                    buses: Vec::new(),
                    branches: Vec::new(),
                }
            }
        }
    }

    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(self).expect("solution document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::testing::two_bus;
    use num_complex::Complex64;

    #[test]
    fn ratio_conventions() {
        let mut case = two_bus(0.0);
        case.branches.push(case.branches[0].clone());
        case.branches[0].rate_mva = 100.0;
        case.branches[1].rate_mva = 0.0;
        let mut sol = solve_nr(&case, &PFOptions::default()).unwrap();
        sol.branch_from_flow = vec![Complex64::new(30.0, 40.0), Complex64::new(30.0, 40.0)];
        sol.branch_to_flow = vec![Complex64::new(-29.0, -39.0), Complex64::new(-29.0, -39.0)];
        assert_eq!(loading_ratios(&case, &sol), vec![0.5, 0.0]);
    }

    #[test]
    fn ranking_breaks_ties_by_index() {
        let mut case = two_bus(0.0);
        for _ in 0..3 {
            case.branches.push(case.branches[0].clone());
        }
        case.branches[2].status = crate::grid::BranchStatus::Out;
        assert_eq!(rank_by_loading(&case, &[0.2, 0.5, 0.9, 0.5]), vec![1, 3, 0]);
    }

    #[test]
    fn document_reports_convergence() {
        let case = crate::grid::bundled::case14();
        let doc = SolutionDocument::new(&case, &solve_nr(&case, &PFOptions::default())).to_yaml();
        assert!(doc.contains("converged: true"));
        assert_eq!(doc.matches("v_mag_pu").count(), 14);
    }
}
