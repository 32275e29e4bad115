use serde::{Deserialize, Serialize};

use crate::grid::{hop_distances, GridCase};

/// Weights of the three start-up priority ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitnessWeights {
    pub w_capacity: f64,
    pub w_ramp: f64,
    pub w_distance: f64,
}

impl Default for FitnessWeights {
    fn default() -> Self {
        FitnessWeights {
            w_capacity: 1.0,
            w_ramp: 1.0,
            w_distance: 1.0,
        }
    }
}

impl FitnessWeights {
    pub fn is_valid(&self) -> bool {
        let w = [self.w_capacity, self.w_ramp, self.w_distance];
        w.iter().all(|x| *x >= 0.0 && x.is_finite()) && w.iter().any(|x| *x > 0.0)
    }
}

/// Per-generator priority scores for a fixed candidate set.
#[derive(Debug, Clone)]
pub(crate) struct FitnessModel {
    /// Scores indexed like `generators`.
    pub scores: Vec<f64>,
}

impl FitnessModel {
    /// `generators` are indices into `case.generators`; capacity and ramp
    /// shares are taken over this set.
    pub fn new(case: &GridCase, generators: &[usize], weights: &FitnessWeights) -> Self {
        let idx = case.bus_index();
        let demand_buses: Vec<usize> = case
            .buses
            .iter()
            .enumerate()
            .filter(|(_, b)| b.p_demand > 0.0)
            .map(|(i, _)| i)
            .collect();
        let hops = hop_distances(case, &demand_buses);
        let total_cap: f64 = generators.iter().map(|&g| case.generators[g].p_max).sum();
        let total_ramp: f64 = generators
            .iter()
            .map(|&g| case.generators[g].ramp_rate)
            .sum();
        let share = |x: f64, total: f64| if total > 0.0 { x / total } else { 0.0 };
        let scores = generators
            .iter()
            .map(|&g| {
                let gen = &case.generators[g];
                let proximity = match hops[idx.of(gen.bus)] {
                    Some(d) => 1.0 / (1.0 + d as f64),
                    None => 0.0,
                };
                weights.w_capacity * share(gen.p_max, total_cap)
                    + weights.w_ramp * share(gen.ramp_rate, total_ramp)
                    + weights.w_distance * proximity
            })
            .collect();
        FitnessModel { scores }
    }

    /// Rank-weighted sum for an order given as positions into the candidate set.
    pub fn evaluate(&self, positions: &[usize]) -> f64 {
        let n = positions.len();
        positions
            .iter()
            .enumerate()
            .map(|(r, &p)| (n - r) as f64 * self.scores[p])
            .sum()
    }
}

/// Start-up sequence score: `Σ (n − r) · s(g_r)` over ranks `r`, where
/// `s(g)` mixes the unit's share of total capacity, its share of total ramp
/// rate, and `1 / (1 + d)` with `d` the hop distance from its bus to the
/// nearest bus with positive demand. Higher is better.
///
/// `order` holds indices into `case.generators`; shares are computed over
/// the generators it contains.
pub fn sequence_fitness(order: &[usize], case: &GridCase, weights: &FitnessWeights) -> f64 {
    let model = FitnessModel::new(case, order, weights);
    let positions: Vec<usize> = (0..order.len()).collect();
    model.evaluate(&positions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::bundled;
    use crate::grid::testing::{generator, two_bus};

    #[test]
    fn single_generator_scores_its_priority() {
        let case = two_bus(10.0);
        // Full capacity and ramp shares, one hop to the load.
        assert!((sequence_fitness(&[0], &case, &FitnessWeights::default()) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn identical_generators_are_symmetric() {
        let mut case = two_bus(10.0);
        case.generators.push(generator(1, 200.0));
        let w = FitnessWeights::default();
        assert_eq!(
            sequence_fitness(&[0, 1], &case, &w),
            sequence_fitness(&[1, 0], &case, &w)
        );
    }

    #[test]
    fn zero_weights_are_invalid() {
        assert!(!FitnessWeights {
            w_capacity: 0.0,
            w_ramp: 0.0,
            w_distance: 0.0
        }
        .is_valid());
        assert!(FitnessWeights::default().is_valid());
    }

    #[test]
    fn case14_prefers_the_large_unit_first() {
        let case = bundled::case14();
        let w = FitnessWeights::default();
        assert!(
            sequence_fitness(&[0, 1, 2, 3, 4], &case, &w)
                > sequence_fitness(&[4, 3, 2, 1, 0], &case, &w)
        );
    }
}
