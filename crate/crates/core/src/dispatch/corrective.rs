use super::{
    apply_dispatch, Binding, DispatchError, DispatchResult, OperatingPoint, ViolationKind,
};
use crate::grid::{BusKind, GridCase};
use num_complex::Complex64;

use crate::power_flow::{loading_ratios, solve_nr, PFOptions, PowerFlowSolution};

const MAX_MOVES: usize = 20;
/// Loading a corrective move aims for on every rated branch.
const TARGET_LOADING: f64 = 0.99;
const PROBE_MW: f64 = 1.0;
const BACKTRACKS: usize = 4;

/// Total MVA above the target loading, summed over rated branches, for
/// branch end flows `from` and `to`.
fn excess(
    case: &GridCase,
    from: impl Fn(usize) -> Complex64,
    to: impl Fn(usize) -> Complex64,
) -> f64 {
    case.branches
        .iter()
        .enumerate()
        .filter(|(_, b)| b.in_service() && b.rate_mva > 0.0)
        .map(|(k, b)| (from(k).norm().max(to(k).norm()) - TARGET_LOADING * b.rate_mva).max(0.0))
        .sum()
}

fn solution_excess(case: &GridCase, sol: &PowerFlowSolution) -> f64 {
    excess(case, |k| sol.branch_from_flow[k], |k| sol.branch_to_flow[k])
}

/// Minimizer of a convex `f` on `[lo, hi]` (with `lo <= 0 <= hi`) that is
/// closest to zero.
fn smallest_minimizer(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..100 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let best = 0.5 * (a + b);
    let target = f(best) + 1e-9;
    let (mut near, mut far) = (0.0, best);
    if f(near) <= target {
        return near;
    }
    for _ in 0..60 {
        let mid = 0.5 * (near + far);
        if f(mid) <= target {
            far = mid;
        } else {
            near = mid;
        }
    }
    far
}

/// Shifts generation away from overloaded branches.
///
/// Each move probes every non-slack unit with one extra MW to linearize
/// branch flows, then applies the single-unit shift that minimizes the
/// predicted total MVA above 99% of the ratings (the slack unit absorbs
/// the difference). A move is kept only if the re-solved flow confirms an
/// improvement, halving the shift up to four times otherwise. Stops when
/// nothing is overloaded, no move helps, or after 20 moves. Remaining
/// overloads stay in the returned point's violations.
pub fn relieve_overloads(
    case: &GridCase,
    op: &OperatingPoint,
    opts: &PFOptions,
) -> Result<OperatingPoint, DispatchError> {
    let idx = case.bus_index();
    let gens = &op.generators;
    let slack_unit: Vec<bool> = gens
        .iter()
        .map(|&g| case.buses[idx.of(case.generators[g].bus)].kind == BusKind::Slack)
        .collect();
    let limits: Vec<(f64, f64)> = gens
        .iter()
        .map(|&g| (case.generators[g].p_min, case.generators[g].p_max))
        .collect();
    let mut p = op.dispatch.p_out.clone();
    let mut current = apply_dispatch(case, gens, &op.dispatch);
    let mut sol = op.solution.clone();
    sync_slack(&mut p, &slack_unit, &op.dispatch.p_out, &sol);

    for _ in 0..MAX_MOVES {
        if loading_ratios(&current, &sol).iter().all(|&r| r <= 1.0) {
            break;
        }
        let base = solution_excess(&current, &sol);
        let (slack_down, slack_up) = slack_room(&p, &slack_unit, &limits);

        // (unit, shift, predicted excess)
        let mut best: Option<(usize, f64, f64)> = None;
        for (j, &g) in gens.iter().enumerate() {
            if slack_unit[j] {
                continue;
            }
            let mut probe = current.clone();
            probe.generators[g].p_out += PROBE_MW;
            let Ok(ps) = solve_nr(&probe, opts) else {
                continue;
            };
            let d_from: Vec<Complex64> = (0..case.branches.len())
                .map(|k| (ps.branch_from_flow[k] - sol.branch_from_flow[k]) / PROBE_MW)
                .collect();
            let d_to: Vec<Complex64> = (0..case.branches.len())
                .map(|k| (ps.branch_to_flow[k] - sol.branch_to_flow[k]) / PROBE_MW)
                .collect();
            let predicted = |d: f64| {
                excess(
                    &current,
                    |k| sol.branch_from_flow[k] + d_from[k] * d,
                    |k| sol.branch_to_flow[k] + d_to[k] * d,
                )
            };
            let lo = -(p[j] - limits[j].0).max(0.0).min(slack_up);
            let hi = (limits[j].1 - p[j]).max(0.0).min(slack_down);
            if hi - lo < 1e-6 {
                continue;
            }
            let d = smallest_minimizer(predicted, lo, hi);
            let value = predicted(d);
            if d.abs() < 1e-3 || value >= base - 1e-6 {
                continue;
            }
            let better = match best {
                None => true,
                Some((_, bd, bv)) => {
                    value < bv - 1e-9 || (value <= bv + 1e-9 && d.abs() < bd.abs())
                }
            };
            if better {
                best = Some((j, d, value));
            }
        }
        let Some((j, shift, _)) = best else { break };

        let mut step = shift;
        let mut accepted = false;
        for _ in 0..=BACKTRACKS {
            let mut trial = current.clone();
            trial.generators[gens[j]].p_out = p[j] + step;
            if let Ok(ts) = solve_nr(&trial, opts) {
                if solution_excess(&trial, &ts) < base - 1e-6 {
                    p[j] += step;
                    let before = p.clone();
                    current = trial;
                    sol = ts;
                    sync_slack(&mut p, &slack_unit, &before, &sol);
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    for (j, &g) in gens.iter().enumerate() {
        current.generators[g].p_out = p[j];
    }
    let costs: Vec<_> = gens
        .iter()
        .map(|&g| {
            case.cost_of(g)
                .cloned()
                .ok_or(DispatchError::MissingCost(g))
        })
        .collect::<Result<_, _>>()?;
    let binding = p
        .iter()
        .zip(&limits)
        .map(|(&x, &(lo, hi))| {
            if x <= lo + 1e-9 {
                Binding::AtMin
            } else if x >= hi - 1e-9 {
                Binding::AtMax
            } else {
                Binding::Interior
            }
        })
        .collect();
    let dispatch = DispatchResult {
        total_cost: costs.iter().zip(&p).map(|(c, &x)| c.cost(x)).sum(),
        p_out: p,
        lambda: op.dispatch.lambda,
        binding,
    };
    let mut out = OperatingPoint::from_parts(&current, gens.clone(), dispatch, sol);
    out.outer_iterations = op.outer_iterations;
    Ok(out)
}

/// Writes the power-flow slack output onto the slack-bus units, keeping
/// all but the first at their scheduled value.
fn sync_slack(p: &mut [f64], slack_unit: &[bool], scheduled: &[f64], sol: &PowerFlowSolution) {
    let units: Vec<usize> = (0..p.len()).filter(|&j| slack_unit[j]).collect();
    if let Some((&first, rest)) = units.split_first() {
        let others: f64 = rest.iter().map(|&j| scheduled[j]).sum();
        p[first] = sol.p_slack - others;
    }
}

/// (room to decrease, room to increase) of the slack units, i.e. how far
/// other units may move up or down.
fn slack_room(p: &[f64], slack_unit: &[bool], limits: &[(f64, f64)]) -> (f64, f64) {
    let mut down = 0.0;
    let mut up = 0.0;
    for j in (0..p.len()).filter(|&j| slack_unit[j]) {
        down += (p[j] - limits[j].0).max(0.0);
        up += (limits[j].1 - p[j]).max(0.0);
    }
    (down, up)
}

/// Overloaded branch indices of an operating point.
pub fn overloaded_branches(op: &OperatingPoint) -> Vec<usize> {
    op.violations
        .iter()
        .filter(|v| v.kind == ViolationKind::LineOverload)
        .filter_map(|v| match v.element {
            super::Element::Branch { index, .. } => Some(index),
            super::Element::Bus { .. } => None,
        })
        .collect()
}
