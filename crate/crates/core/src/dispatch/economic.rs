use serde::{Deserialize, Serialize};

use super::DispatchError;
use crate::grid::CostCurve;

const BIND_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    Interior,
    AtMin,
    AtMax,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispatchResult {
    /// MW per dispatched generator, in input order.
    pub p_out: Vec<f64>,
    /// System incremental cost, currency per MWh.
    pub lambda: f64,
    /// currency per hour
    pub total_cost: f64,
    pub binding: Vec<Binding>,
}

/// Active output of one unit at incremental cost `lambda`. Linear units
/// (`c2 == 0`) sit at a limit unless `lambda` equals their slope.
fn output_at(cost: &CostCurve, (p_min, p_max): (f64, f64), lambda: f64) -> f64 {
    if cost.c2 > 0.0 {
        ((lambda - cost.c1) / (2.0 * cost.c2)).clamp(p_min, p_max)
    } else if lambda > cost.c1 {
        p_max
    } else {
        p_min
    }
}

/// Least-cost dispatch of convex quadratic units meeting `demand` MW.
///
/// Bisects on the incremental cost. Units with a linear cost whose slope
/// equals the final lambda are marginal and take up the remaining
/// imbalance in input order.
pub fn lambda_iteration(
    costs: &[CostCurve],
    limits: &[(f64, f64)],
    demand: f64,
) -> Result<DispatchResult, DispatchError> {
    assert_eq!(costs.len(), limits.len(), "one cost curve per limit pair");
    let min_total: f64 = limits.iter().map(|l| l.0).sum();
    let max_total: f64 = limits.iter().map(|l| l.1).sum();
    let slack = 1e-9 * (1.0 + max_total.abs());
    if costs.is_empty() || demand < min_total - slack || demand > max_total + slack {
        return Err(DispatchError::Infeasible {
            demand,
            min_total,
            max_total,
        });
    }

    let total_at = |lambda: f64| -> f64 {
        costs
            .iter()
            .zip(limits)
            .map(|(c, &l)| output_at(c, l, lambda))
            .sum()
    };
    let mut lo = costs
        .iter()
        .zip(limits)
        .map(|(c, l)| c.marginal(l.0))
        .fold(f64::INFINITY, f64::min)
        - 1.0;
    let mut hi = costs
        .iter()
        .zip(limits)
        .map(|(c, l)| c.marginal(l.1))
        .fold(f64::NEG_INFINITY, f64::max)
        + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if total_at(mid) < demand {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);

    let mut p_out: Vec<f64> = costs
        .iter()
        .zip(limits)
        .map(|(c, &l)| output_at(c, l, lambda))
        .collect();
    let tie = 1e-9 * (1.0 + lambda.abs());
    let marginal_linear: Vec<usize> = (0..costs.len())
        .filter(|&g| costs[g].c2 == 0.0 && (costs[g].c1 - lambda).abs() <= tie)
        .collect();
    for &g in &marginal_linear {
        p_out[g] = limits[g].0;
    }
    let mut residual = demand - p_out.iter().sum::<f64>();
    for &g in &marginal_linear {
        let take = residual.clamp(0.0, limits[g].1 - p_out[g]);
        p_out[g] += take;
        residual -= take;
    }
    // Close the last bisection gap on units with headroom.
    if residual.abs() > 0.0 {
        for g in 0..p_out.len() {
            let (p_min, p_max) = limits[g];
            let movable = p_out[g] > p_min + BIND_EPS && p_out[g] < p_max - BIND_EPS;
            if movable {
                let new = (p_out[g] + residual).clamp(p_min, p_max);
                residual -= new - p_out[g];
                p_out[g] = new;
            }
            if residual == 0.0 {
                break;
            }
        }
    }

    let binding = p_out
        .iter()
        .zip(limits)
        .map(|(&p, &(p_min, p_max))| {
            if p <= p_min + BIND_EPS {
                Binding::AtMin
            } else if p >= p_max - BIND_EPS {
                Binding::AtMax
            } else {
                Binding::Interior
            }
        })
        .collect();
    let total_cost = costs.iter().zip(&p_out).map(|(c, &p)| c.cost(p)).sum();
    Ok(DispatchResult {
        p_out,
        lambda,
        total_cost,
        binding,
    })
}
