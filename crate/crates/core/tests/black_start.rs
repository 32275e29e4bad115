mod common;

use common::{bellman_ford, graph_case, permutations, random_connected_graph};
use dispatchgen::black_start::{
    ga_optimize, plan_black_start, sequence_fitness, sssp_restoration, BlackStartError,
    FitnessWeights, GAConfig, PlanDocument, RestorationEvent,
};
use dispatchgen::grid::{bundled, BusId, GenStatus, GridCase};
use proptest::prelude::*;

/// Best fitness over every start order of the online generators.
fn exhaustive_optimum(case: &GridCase, weights: &FitnessWeights) -> f64 {
    let online = case.online_generators();
    permutations(online.len())
        .into_iter()
        .map(|p| {
            let order: Vec<usize> = p.into_iter().map(|i| online[i]).collect();
            sequence_fitness(&order, case, weights)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn ga_reaches_the_exhaustive_optimum() {
    for case in [bundled::case14(), bundled::case30()] {
        let weights = FitnessWeights::default();
        let best = exhaustive_optimum(&case, &weights);
        let mut hits = 0;
        for seed in 0..100 {
            let plan = ga_optimize(
                &case,
                &GAConfig {
                    seed,
                    ..GAConfig::default()
                },
            )
            .unwrap();
            assert!(
                plan.fitness <= best + 1e-9,
                "{} seed {seed}: {} above optimum {best}",
                case.name,
                plan.fitness
            );
            if (plan.fitness - best).abs() <= 1e-9 {
                hits += 1;
            }
        }
        assert!(
            hits >= 95,
            "{}: optimum reached in {hits}/100 seeds",
            case.name
        );
    }
}

#[test]
fn dijkstra_matches_bellman_ford() {
    for seed in 0..100 {
        let (n, edges) = random_connected_graph(seed, 30);
        let case = graph_case(n, &edges);
        let plan = sssp_restoration(&case, &[BusId(1)]).unwrap();
        let oracle = bellman_ford(n, &edges, &[0]);
        for (i, d) in oracle.iter().enumerate() {
            assert_eq!(
                plan.time_of(BusId(i as u32 + 1)),
                *d,
                "seed {seed}, bus {}",
                i + 1
            );
        }
    }
}

#[test]
fn multi_source_matches_bellman_ford() {
    for seed in 0..30 {
        let (n, edges) = random_connected_graph(seed, 20);
        let case = graph_case(n, &edges);
        let sources = [0, n - 1];
        let ids: Vec<BusId> = sources.iter().map(|&s| BusId(s as u32 + 1)).collect();
        let plan = sssp_restoration(&case, &ids).unwrap();
        let oracle = bellman_ford(n, &edges, &sources);
        for (i, d) in oracle.iter().enumerate() {
            assert_eq!(plan.time_of(BusId(i as u32 + 1)), *d, "seed {seed}");
        }
    }
}

#[test]
fn case30_plan_energizes_every_bus() {
    let plan = plan_black_start(&bundled::case30(), &GAConfig::default()).unwrap();
    let energized = plan
        .merged
        .iter()
        .filter(|e| matches!(e, RestorationEvent::EnergizeBus { .. }))
        .count();
    assert_eq!(energized, 30);
    assert!(plan.unreachable.is_empty());
}

#[test]
fn no_generators_is_an_error() {
    let mut case = bundled::case14();
    for g in &mut case.generators {
        g.status = GenStatus::Off;
    }
    assert!(matches!(
        plan_black_start(&case, &GAConfig::default()),
        Err(BlackStartError::NoGenerators)
    ));
}

#[test]
fn plan_document_is_one_based() {
    let case = bundled::case14();
    let cfg = GAConfig {
        seed: 7,
        ..GAConfig::default()
    };
    let plan = plan_black_start(&case, &cfg).unwrap();
    let doc = PlanDocument::new(&case, &cfg, &plan);
    assert_eq!(
        doc.startup.iter().map(|s| s.rank).collect::<Vec<_>>(),
        (1..=5).collect::<Vec<_>>()
    );
    assert_eq!(doc.startup[0].generator, plan.generator_plan.order[0] + 1);
    let back: PlanDocument = serde_yaml::from_str(&doc.to_yaml()).unwrap();
    assert_eq!(back, doc);
}

fn merged_plan_is_consistent(case: &GridCase, cfg: &GAConfig) {
    let plan = plan_black_start(case, cfg).unwrap();
    let times: Vec<f64> = plan.merged.iter().map(RestorationEvent::time).collect();
    assert!(
        times.windows(2).all(|w| w[0] <= w[1]),
        "events out of order"
    );
    let mut energized = std::collections::HashMap::new();
    for e in &plan.merged {
        match *e {
            RestorationEvent::EnergizeBus { time, bus } => {
                assert!(
                    energized.insert(bus, time).is_none(),
                    "bus {bus:?} energized twice"
                );
            }
            RestorationEvent::StartGenerator { time, bus, .. } => {
                let at = energized
                    .get(&bus)
                    .expect("generator starts on an energized bus");
                assert!(time >= *at);
            }
        }
    }
    let mut started: Vec<usize> = plan
        .merged
        .iter()
        .filter_map(|e| match e {
            RestorationEvent::StartGenerator { generator, .. } => Some(*generator),
            _ => None,
        })
        .collect();
    started.sort_unstable();
    assert_eq!(started, case.online_generators());
    assert_eq!(energized.len() + plan.unreachable.len(), case.buses.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn merged_plans_respect_energization(seed in 0u64..1_000, restore in prop::collection::vec(1u32..6, 20)) {
        let mut case = bundled::case14();
        for (br, t) in case.branches.iter_mut().zip(restore.iter().cycle()) {
            br.restore_time = f64::from(*t);
        }
        let cfg = GAConfig { seed, population: 16, generations: 20, ..GAConfig::default() };
        merged_plan_is_consistent(&case, &cfg);
    }

    #[test]
    fn ga_output_is_a_permutation_and_never_beats_the_optimum(seed in 0u64..10_000) {
        let case = bundled::case14();
        let cfg = GAConfig { seed, population: 12, generations: 10, ..GAConfig::default() };
        let plan = ga_optimize(&case, &cfg).unwrap();
        let mut order = plan.order.clone();
        order.sort_unstable();
        prop_assert_eq!(order, case.online_generators());
        prop_assert!(plan.fitness <= exhaustive_optimum(&case, &cfg.weights) + 1e-9);
        prop_assert!((plan.fitness - sequence_fitness(&plan.order, &case, &cfg.weights)).abs() < 1e-9);
    }
}
