use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fitness::{FitnessModel, FitnessWeights};
use super::{BlackStartError, GeneratorStartPlan};
use crate::grid::GridCase;
use crate::rng::{Family, Substream};

const TOURNAMENT: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GAConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Probability that an offspring receives one swap.
    pub mutation_rate: f64,
    pub elitism: usize,
    pub seed: u64,
    pub weights: FitnessWeights,
}

impl Default for GAConfig {
    fn default() -> Self {
        GAConfig {
            population: 64,
            generations: 200,
            crossover_rate: 0.9,
            mutation_rate: 0.2,
            elitism: 2,
            seed: 0,
            weights: FitnessWeights::default(),
        }
    }
}

impl GAConfig {
    pub fn check(&self) -> Result<(), BlackStartError> {
        let rate = |r: f64| (0.0..=1.0).contains(&r);
        let mut problems = Vec::new();
        if self.population < 2 {
            problems.push("population must be at least 2".to_string());
        }
        if !rate(self.crossover_rate) || !rate(self.mutation_rate) {
            problems.push("crossover_rate and mutation_rate must lie in [0, 1]".to_string());
        }
        if self.elitism >= self.population {
            problems.push("elitism must be smaller than population".to_string());
        }
        if !self.weights.is_valid() {
            problems.push(
                "fitness weights must be non-negative with at least one positive".to_string(),
            );
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(BlackStartError::InvalidConfig(problems))
        }
    }
}

/// Best fitness seen after each generation, starting with the initial population.
pub type FitnessHistory = Vec<f64>;

/// Orders the online generators' start-up with a permutation GA.
pub fn ga_optimize(case: &GridCase, cfg: &GAConfig) -> Result<GeneratorStartPlan, BlackStartError> {
    ga_optimize_with_history(case, cfg).map(|(plan, _)| plan)
}

pub fn ga_optimize_with_history(
    case: &GridCase,
    cfg: &GAConfig,
) -> Result<(GeneratorStartPlan, FitnessHistory), BlackStartError> {
    cfg.check()?;
    let candidates = case.online_generators();
    if candidates.is_empty() {
        return Err(BlackStartError::NoGenerators);
    }
    let model = FitnessModel::new(case, &candidates, &cfg.weights);
    let n = candidates.len();
    let mut rng = Substream::new(cfg.seed, Family::Genetic, 0);

    let mut population: Vec<Vec<usize>> = (0..cfg.population)
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut p);
            p
        })
        .collect();
    let mut fitness = evaluate_all(&model, &population);
    let (mut best, mut best_fit) = fittest(&population, &fitness);
    let mut history = vec![best_fit];

    for _ in 0..cfg.generations {
        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));
        let mut next: Vec<Vec<usize>> = ranked[..cfg.elitism]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < cfg.population {
            let a = tournament(&mut rng, &fitness);
            let b = tournament(&mut rng, &fitness);
            let mut child = if rng.unit() < cfg.crossover_rate {
                order_crossover(&mut rng, &population[a], &population[b])
            } else {
                population[a].clone()
            };
            if n > 1 && rng.unit() < cfg.mutation_rate {
                let i = rng.below(n);
                let j = rng.below(n);
                child.swap(i, j);
            }
            next.push(child);
        }
        population = next;
        fitness = evaluate_all(&model, &population);
        let (cand, cand_fit) = fittest(&population, &fitness);
        if cand_fit > best_fit {
            best = cand;
            best_fit = cand_fit;
        }
        history.push(best_fit);
    }

    let plan = GeneratorStartPlan {
        order: best.iter().map(|&p| candidates[p]).collect(),
        fitness: best_fit,
        per_generator_score: best.iter().map(|&p| model.scores[p]).collect(),
    };
    Ok((plan, history))
}

fn evaluate_all(model: &FitnessModel, population: &[Vec<usize>]) -> Vec<f64> {
    population.par_iter().map(|p| model.evaluate(p)).collect()
}

fn fittest(population: &[Vec<usize>], fitness: &[f64]) -> (Vec<usize>, f64) {
    let mut best = 0;
    for i in 1..population.len() {
        if fitness[i] > fitness[best] {
            best = i;
        }
    }
    (population[best].clone(), fitness[best])
}

fn tournament(rng: &mut Substream, fitness: &[f64]) -> usize {
    let mut winner = rng.below(fitness.len());
    for _ in 1..TOURNAMENT {
        let c = rng.below(fitness.len());
        if fitness[c] > fitness[winner] || (fitness[c] == fitness[winner] && c < winner) {
            winner = c;
        }
    }
    winner
}

/// OX1: keep a slice of `a`, fill the rest with `b`'s genes in `b`'s order
/// starting after the slice.
fn order_crossover(rng: &mut Substream, a: &[usize], b: &[usize]) -> Vec<usize> {
    let n = a.len();
    if n < 2 {
        return a.to_vec();
    }
    let (mut lo, mut hi) = (rng.below(n), rng.below(n));
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for i in lo..=hi {
        child[i] = a[i];
        used[a[i]] = true;
    }
    let mut pos = (hi + 1) % n;
    for k in 0..n {
        let gene = b[(hi + 1 + k) % n];
        if !used[gene] {
            child[pos] = gene;
            used[gene] = true;
            pos = (pos + 1) % n;
        }
    }
    child
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::bundled;
    use crate::grid::testing::two_bus;

    fn is_permutation(p: &[usize]) -> bool {
        let mut s = p.to_vec();
        s.sort_unstable();
        s.iter().enumerate().all(|(i, &x)| i == x)
    }

    #[test]
    fn crossover_and_mutation_keep_permutations() {
        let mut rng = Substream::new(3, Family::Genetic, 1);
        for _ in 0..500 {
            let mut a: Vec<usize> = (0..9).collect();
            let mut b = a.clone();
            rng.shuffle(&mut a);
            rng.shuffle(&mut b);
            assert!(is_permutation(&order_crossover(&mut rng, &a, &b)));
        }
    }

    #[test]
    fn single_generator_is_immediate() {
        let (plan, _) = ga_optimize_with_history(&two_bus(10.0), &GAConfig::default()).unwrap();
        assert_eq!(plan.order, vec![0]);
        assert!((plan.fitness - plan.per_generator_score[0]).abs() < 1e-12);
    }

    #[test]
    fn deterministic_and_monotone() {
        let case = bundled::case30();
        let cfg = GAConfig {
            seed: 11,
            generations: 40,
            ..GAConfig::default()
        };
        let (a, hist) = ga_optimize_with_history(&case, &cfg).unwrap();
        let (b, _) = ga_optimize_with_history(&case, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(hist.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(hist.len(), 41);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = GAConfig {
            elitism: 64,
            ..GAConfig::default()
        };
        assert!(matches!(
            ga_optimize(&bundled::case14(), &cfg),
            Err(BlackStartError::InvalidConfig(_))
        ));
    }
}
