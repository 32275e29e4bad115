use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ybus::{branch_primitive, build_ybus, AdmittanceMatrix};
use crate::grid::{component_labels, BusId, BusKind, GridCase};

/// Reactive output outside a PV bus's limits by more than this (MVAr)
/// converts the bus to PQ.
const Q_LIMIT_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PFOptions {
    /// Largest allowed active/reactive mismatch, per unit.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub flat_start: bool,
    pub enforce_q_limits: bool,
}

impl Default for PFOptions {
    fn default() -> Self {
        PFOptions {
            tolerance: 1e-8,
            max_iterations: 30,
            flat_start: true,
            enforce_q_limits: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QLimit {
    Max,
    Min,
}

/// A PV bus that hit a reactive limit and was solved as PQ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvSwitch {
    pub bus: BusId,
    pub limit: QLimit,
    pub q_mvar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusReactive {
    pub bus: BusId,
    pub q_mvar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerFlowSolution {
    pub bus_ids: Vec<BusId>,
    /// False for buses in dead islands (no slack, no demand); their voltage is zero.
    pub energized: Vec<bool>,
    pub v_mag: Vec<f64>,
    /// radians
    pub v_ang: Vec<f64>,
    /// Total active output at slack buses, MW.
    pub p_slack: f64,
    /// Reactive output at every generator-regulated bus (slack and PV).
    pub q_gen: Vec<BusReactive>,
    /// Complex power entering each branch at its from end, MVA. Zero for
    /// out-of-service branches.
    pub branch_from_flow: Vec<Complex64>,
    pub branch_to_flow: Vec<Complex64>,
    pub iterations: usize,
    pub max_mismatch: f64,
    pub pv_switches: Vec<PvSwitch>,
}

impl PowerFlowSolution {
    /// Real losses per branch, MW.
    pub fn branch_losses(&self) -> Vec<f64> {
        self.branch_from_flow
            .iter()
            .zip(&self.branch_to_flow)
            .map(|(f, t)| (f + t).re)
            .collect()
    }

    pub fn total_losses(&self) -> f64 {
        self.branch_losses().iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum PowerFlowError {
    #[error(
        "power flow diverged after {iterations} iterations (mismatch {final_mismatch:.3e} p.u.)"
    )]
    Diverged {
        iterations: usize,
        final_mismatch: f64,
    },
    #[error("island with demand but no slack bus: {buses:?}")]
    IslandedCase { buses: Vec<BusId> },
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Slack,
    Pv,
    Pq,
    Dead,
}

struct Injections {
    /// Specified P per bus, p.u.
    p: Vec<f64>,
    /// Specified Q per bus, p.u. (used on PQ buses only).
    q: Vec<f64>,
    q_max: Vec<f64>,
    q_min: Vec<f64>,
    setpoint: Vec<Option<f64>>,
}

fn injections(case: &GridCase) -> Injections {
    let n = case.buses.len();
    let idx = case.bus_index();
    let base = case.base_mva;
    let mut inj = Injections {
        p: case.buses.iter().map(|b| -b.p_demand / base).collect(),
        q: case.buses.iter().map(|b| -b.q_demand / base).collect(),
        q_max: vec![0.0; n],
        q_min: vec![0.0; n],
        setpoint: vec![None; n],
    };
    for g in case.generators.iter().filter(|g| g.is_on()) {
        let i = idx.of(g.bus);
        inj.p[i] += g.p_out / base;
        inj.q[i] += g.q_out / base;
        inj.q_max[i] += g.q_max;
        inj.q_min[i] += g.q_min;
        inj.setpoint[i].get_or_insert(g.v_setpoint);
    }
    inj
}

fn assign_roles(case: &GridCase, inj: &Injections) -> Result<Vec<Role>, PowerFlowError> {
    let (labels, count) = component_labels(case, true);
    let mut has_slack = vec![false; count];
    let mut has_demand = vec![false; count];
    for (i, bus) in case.buses.iter().enumerate() {
        has_slack[labels[i]] |= bus.kind == BusKind::Slack;
        has_demand[labels[i]] |= bus.has_demand();
    }
    if let Some(c) = (0..count).find(|&c| !has_slack[c] && has_demand[c]) {
        let buses = case
            .buses
            .iter()
            .zip(&labels)
            .filter(|(_, &l)| l == c)
            .map(|(b, _)| b.id)
            .collect();
        return Err(PowerFlowError::IslandedCase { buses });
    }
    Ok(case
        .buses
        .iter()
        .enumerate()
        .map(|(i, bus)| {
            if !has_slack[labels[i]] {
                Role::Dead
            } else {
                match bus.kind {
                    BusKind::Slack => Role::Slack,
                    BusKind::PV if inj.setpoint[i].is_some() => Role::Pv,
                    _ => Role::Pq,
                }
            }
        })
        .collect())
}

struct Columns {
    angle: Vec<Option<usize>>,
    magnitude: Vec<Option<usize>>,
    size: usize,
}

fn columns(roles: &[Role]) -> Columns {
    let mut angle = vec![None; roles.len()];
    let mut magnitude = vec![None; roles.len()];
    let mut next = 0;
    for (i, r) in roles.iter().enumerate() {
        if matches!(r, Role::Pv | Role::Pq) {
            angle[i] = Some(next);
            next += 1;
        }
    }
    for (i, r) in roles.iter().enumerate() {
        if *r == Role::Pq {
            magnitude[i] = Some(next);
            next += 1;
        }
    }
    Columns {
        angle,
        magnitude,
        size: next,
    }
}

fn mismatch(
    y: &AdmittanceMatrix,
    v: &[Complex64],
    inj: &Injections,
    cols: &Columns,
) -> (DVector<f64>, Vec<Complex64>) {
    let current = y.mul_vec(v);
    let mut f = DVector::zeros(cols.size);
    for i in 0..v.len() {
        let s = v[i] * current[i].conj();
        if let Some(c) = cols.angle[i] {
            f[c] = s.re - inj.p[i];
        }
        if let Some(c) = cols.magnitude[i] {
            f[c] = s.im - inj.q[i];
        }
    }
    (f, current)
}

fn jacobian(
    y: &AdmittanceMatrix,
    v: &[Complex64],
    current: &[Complex64],
    cols: &Columns,
) -> DMatrix<f64> {
    let j = Complex64::i();
    let mut jac = DMatrix::zeros(cols.size, cols.size);
    for i in 0..v.len() {
        let (prow, qrow) = (cols.angle[i], cols.magnitude[i]);
        if prow.is_none() && qrow.is_none() {
            continue;
        }
        for &(k, yik) in y.row(i) {
            let unit_k = v[k] / v[k].norm();
            let (ds_dva, ds_dvm) = if k == i {
                (
                    j * v[i] * (current[i] - yik * v[i]).conj(),
                    v[i] * (yik * unit_k).conj() + current[i].conj() * unit_k,
                )
            } else {
                (
                    -j * v[i] * (yik * v[k]).conj(),
                    v[i] * (yik * unit_k).conj(),
                )
            };
            if let Some(r) = prow {
                if let Some(c) = cols.angle[k] {
                    jac[(r, c)] += ds_dva.re;
                }
                if let Some(c) = cols.magnitude[k] {
                    jac[(r, c)] += ds_dvm.re;
                }
            }
            if let Some(r) = qrow {
                if let Some(c) = cols.angle[k] {
                    jac[(r, c)] += ds_dva.im;
                }
                if let Some(c) = cols.magnitude[k] {
                    jac[(r, c)] += ds_dvm.im;
                }
            }
        }
    }
    jac
}

/// Solves AC power flow by full Newton-Raphson in polar coordinates.
///
/// Generator active outputs are taken from the case; slack buses absorb the
/// balance. With `enforce_q_limits`, every converged point is checked
/// against PV reactive limits and violating buses are converted to PQ at the
/// binding limit before iterating on. The slack bus is never converted.
pub fn solve_nr(case: &GridCase, opts: &PFOptions) -> Result<PowerFlowSolution, PowerFlowError> {
    let n = case.buses.len();
    let base = case.base_mva;
    let y = build_ybus(case);
    let mut inj = injections(case);
    let mut roles = assign_roles(case, &inj)?;

    // Initial voltages. Flat angles follow the slack angle of each island.
    let (labels, count) = component_labels(case, true);
    let mut island_angle = vec![0.0; count];
    for (i, bus) in case.buses.iter().enumerate() {
        if bus.kind == BusKind::Slack {
            island_angle[labels[i]] = bus.v_ang_init.to_radians();
        }
    }
    let mut vm = vec![0.0; n];
    let mut va = vec![0.0; n];
    for (i, bus) in case.buses.iter().enumerate() {
        match roles[i] {
            Role::Dead => continue,
            Role::Slack | Role::Pv => vm[i] = inj.setpoint[i].unwrap_or(bus.v_mag_init),
            Role::Pq => vm[i] = if opts.flat_start { 1.0 } else { bus.v_mag_init },
        }
        va[i] = if opts.flat_start || bus.kind == BusKind::Slack {
            island_angle[labels[i]]
        } else {
            bus.v_ang_init.to_radians()
        };
    }
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(vm[i], va[i]))
        .collect();

    let mut cols = columns(&roles);
    let mut switches: Vec<PvSwitch> = Vec::new();
    let mut iterations = 0;
    let final_mismatch;
    loop {
        let (f, current) = mismatch(&y, &v, &inj, &cols);
        let norm = f.amax();
        if !norm.is_finite() {
            return Err(PowerFlowError::Diverged {
                iterations,
                final_mismatch: norm,
            });
        }
        if norm <= opts.tolerance {
            if opts.enforce_q_limits {
                let mut switched = false;
                for i in 0..n {
                    if roles[i] != Role::Pv {
                        continue;
                    }
                    let q = (v[i] * current[i].conj()).im * base + case.buses[i].q_demand;
                    let limit = if q > inj.q_max[i] + Q_LIMIT_EPS {
                        Some((QLimit::Max, inj.q_max[i]))
                    } else if q < inj.q_min[i] - Q_LIMIT_EPS {
                        Some((QLimit::Min, inj.q_min[i]))
                    } else {
                        None
                    };
                    if let Some((kind, q_mvar)) = limit {
                        roles[i] = Role::Pq;
                        inj.q[i] = (q_mvar - case.buses[i].q_demand) / base;
                        switches.push(PvSwitch {
                            bus: case.buses[i].id,
                            limit: kind,
                            q_mvar,
                        });
                        switched = true;
                    }
                }
                if switched {
                    cols = columns(&roles);
                    continue;
                }
            }
            final_mismatch = norm;
            break;
        }
        if iterations >= opts.max_iterations {
            return Err(PowerFlowError::Diverged {
                iterations,
                final_mismatch: norm,
            });
        }
        let jac = jacobian(&y, &v, &current, &cols);
        let Some(dx) = jac.lu().solve(&(-f)) else {
            return Err(PowerFlowError::Diverged {
                iterations,
                final_mismatch: norm,
            });
        };
        iterations += 1;
        for i in 0..n {
            if let Some(c) = cols.angle[i] {
                va[i] += dx[c];
            }
            if let Some(c) = cols.magnitude[i] {
                vm[i] += dx[c];
            }
            if roles[i] != Role::Dead {
                v[i] = Complex64::from_polar(vm[i], va[i]);
            }
        }
    }

    let current = y.mul_vec(&v);
    let s: Vec<Complex64> = (0..n).map(|i| v[i] * current[i].conj() * base).collect();
    let p_slack = (0..n)
        .filter(|&i| roles[i] == Role::Slack)
        .map(|i| s[i].re + case.buses[i].p_demand)
        .sum();

    let mut q_gen = Vec::new();
    for i in 0..n {
        let regulated = roles[i] == Role::Slack || (roles[i] == Role::Pv);
        if regulated {
            q_gen.push(BusReactive {
                bus: case.buses[i].id,
                q_mvar: s[i].im + case.buses[i].q_demand,
            });
        } else if let Some(sw) = switches.iter().rev().find(|sw| sw.bus == case.buses[i].id) {
            q_gen.push(BusReactive {
                bus: sw.bus,
                q_mvar: sw.q_mvar,
            });
        }
    }

    let idx = case.bus_index();
    let zero = Complex64::new(0.0, 0.0);
    let mut from_flow = vec![zero; case.branches.len()];
    let mut to_flow = vec![zero; case.branches.len()];
    for (k, br) in case.branches.iter().enumerate() {
        let (f, t) = (idx.of(br.from_bus), idx.of(br.to_bus));
        if !br.in_service() || roles[f] == Role::Dead {
            continue;
        }
        let p = branch_primitive(br);
        from_flow[k] = v[f] * (p.yff * v[f] + p.yft * v[t]).conj() * base;
        to_flow[k] = v[t] * (p.ytf * v[f] + p.ytt * v[t]).conj() * base;
    }

    Ok(PowerFlowSolution {
        bus_ids: case.buses.iter().map(|b| b.id).collect(),
        energized: roles.iter().map(|r| *r != Role::Dead).collect(),
        v_mag: vm,
        v_ang: va,
        p_slack,
        q_gen,
        branch_from_flow: from_flow,
        branch_to_flow: to_flow,
        iterations,
        max_mismatch: final_mismatch,
        pv_switches: switches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::bundled;
    use crate::grid::testing::two_bus;

    #[test]
    fn zero_load_two_bus_is_trivial() {
        let sol = solve_nr(&two_bus(0.0), &PFOptions::default()).unwrap();
        assert!(sol.iterations <= 2);
        assert!(sol.p_slack.abs() < 1e-9);
        assert!(sol.branch_from_flow.iter().all(|s| s.norm() < 1e-9));
    }

    #[test]
    fn two_bus_load_is_served_with_losses() {
        let sol = solve_nr(&two_bus(10.0), &PFOptions::default()).unwrap();
        assert!(sol.max_mismatch <= 1e-8);
        assert!(sol.p_slack > 10.0 && sol.p_slack < 10.1, "{}", sol.p_slack);
        assert!((sol.total_losses() - (sol.p_slack - 10.0)).abs() < 1e-6);
    }

    #[test]
    fn heavy_case14_load_diverges() {
        let err = solve_nr(
            &bundled::case14().with_load_scale(20.0),
            &PFOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, PowerFlowError::Diverged { .. }));
    }

    #[test]
    fn load_island_without_slack_is_reported() {
        let mut case = two_bus(10.0);
        case.branches[0].status = crate::grid::BranchStatus::Out;
        let err = solve_nr(&case, &PFOptions::default()).unwrap_err();
        assert_eq!(
            err,
            PowerFlowError::IslandedCase {
                buses: vec![BusId(2)]
            }
        );
    }

    #[test]
    fn dead_island_without_demand_is_skipped() {
        let mut case = two_bus(0.0);
        case.branches[0].status = crate::grid::BranchStatus::Out;
        let sol = solve_nr(&case, &PFOptions::default()).unwrap();
        assert_eq!(sol.energized, vec![true, false]);
        assert_eq!(sol.v_mag[1], 0.0);
    }

    #[test]
    fn tight_reactive_limit_switches_pv_bus() {
        let mut case = bundled::case14();
        // Generator at bus 2 normally supplies more than 40 MVAr.
        case.generators[1].q_max = 20.0;
        let sol = solve_nr(&case, &PFOptions::default()).unwrap();
        assert_eq!(sol.pv_switches.len(), 1);
        assert_eq!(sol.pv_switches[0].bus, BusId(2));
        let q = sol.q_gen.iter().find(|q| q.bus == BusId(2)).unwrap();
        assert!(q.q_mvar <= 20.0 + 1e-8);
        assert!(sol.v_mag[1] < 1.045);
    }

    #[test]
    fn repeated_solves_are_bit_identical() {
        let case = bundled::case57();
        let a = solve_nr(&case, &PFOptions::default()).unwrap();
        let b = solve_nr(&case, &PFOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}
