use dispatchgen::dispatch::{voltage_boundary_report, Element, ViolationKind, VoltageStatus};
use dispatchgen::grid::bundled;
use dispatchgen::power_flow::{loading_ratios, rank_by_loading};
use dispatchgen::scenario::{
    generate_adjustment, generate_batch, generate_black_start, generate_monitoring, AdjustmentPost,
    PostResult, SafetyLabel, ScenarioConfig, UNLIMITED_RATING_MVA,
};
use proptest::prelude::*;

#[test]
fn monitoring_stream_is_reproducible_and_sound() {
    let case = bundled::case14();
    let cfg = ScenarioConfig {
        seed: 21,
        samples: 150,
        ..ScenarioConfig::default()
    };
    let serialize = || -> Vec<String> {
        generate_batch(&cfg, |i| generate_monitoring(&case, &cfg, i))
            .into_iter()
            .map(|r| serde_json::to_string(&r.unwrap()).unwrap())
            .collect()
    };
    let first = serialize();
    assert_eq!(first, serialize());

    for line in &first {
        let s: dispatchgen::scenario::MonitoringScenario = serde_json::from_str(line).unwrap();
        if s.islanded {
            assert_eq!(s.label, SafetyLabel::Unsafe);
        }
        if s.label == SafetyLabel::Safe {
            let PostResult::Converged { point } = &s.post_result else {
                panic!("Safe without a converged flow")
            };
            assert!(point.solution.max_mismatch <= cfg.pf.tolerance);
            let report = voltage_boundary_report(point, &s.thresholds);
            assert!(report.iter().all(|b| b.status != VoltageStatus::Critical));
        }
    }
}

#[test]
fn skips_are_conserved() {
    let case = bundled::case14().with_load_scale(2.6);
    let cfg = ScenarioConfig {
        samples: 30,
        ..ScenarioConfig::default()
    };
    let results = generate_batch(&cfg, |i| generate_monitoring(&case, &cfg, i));
    let produced = results.iter().filter(|r| r.is_ok()).count();
    let skipped = results.iter().filter(|r| r.is_err()).count();
    assert_eq!(produced + skipped, cfg.samples);
    assert!(skipped > 0, "a 2.6x load should defeat some samples");
    for (i, r) in results.iter().enumerate() {
        if let Err(s) = r {
            assert_eq!(s.index, i as u64);
        }
    }
}

#[test]
fn adjustment_reduces_the_most_loaded_lines() {
    let case = bundled::case30();
    let cfg = ScenarioConfig {
        seed: 5,
        ..ScenarioConfig::default()
    };
    let mut relieved = 0;
    for i in 0..10 {
        let s = generate_adjustment(&case, &cfg, i).unwrap();
        let sampled = s.sample.apply(&case);
        let ranked = rank_by_loading(&sampled, &loading_ratios(&sampled, &s.pre.solution));
        let reduced: Vec<usize> = s.reduced_lines.iter().map(|l| l.branch).collect();
        assert_eq!(reduced, ranked[..cfg.top_k_lines].to_vec());
        for l in &s.reduced_lines {
            let f = l.new_rate / l.basis_rate;
            assert!(f >= cfg.reduction_range.0 - 1e-12 && f <= cfg.reduction_range.1 + 1e-12);
            if l.old_rate > 0.0 && l.old_rate < UNLIMITED_RATING_MVA {
                assert_eq!(l.basis_rate, l.old_rate);
            }
        }
        if let AdjustmentPost::Solved { point } = &s.post {
            let post_case = s.post_case(&case);
            let ratios = loading_ratios(&post_case, &point.solution);
            let reported = |k: usize| {
                point.violations.iter().any(|v| {
                    v.kind == ViolationKind::LineOverload
                        && matches!(v.element, Element::Branch { index, .. } if index == k)
                })
            };
            for l in &s.reduced_lines {
                assert!(
                    ratios[l.branch] <= 1.0 + 1e-6 || reported(l.branch),
                    "sample {i}, branch {}",
                    l.branch
                );
            }
            let excess = |ratios: &[f64]| -> f64 {
                post_case
                    .branches
                    .iter()
                    .zip(ratios)
                    .filter(|(b, _)| b.rate_mva > 0.0)
                    .map(|(b, r)| ((r - 0.99) * b.rate_mva).max(0.0))
                    .sum()
            };
            let event = excess(&loading_ratios(&post_case, &s.pre.solution));
            let after = excess(&ratios);
            assert!(
                after <= event + 1e-6,
                "sample {i}: overload grew from {event} to {after}"
            );
            if after < event - 1e-6 {
                relieved += 1;
            }
        }
    }
    assert!(
        relieved >= 5,
        "overload reduced in only {relieved}/10 samples"
    );
}

#[test]
fn black_start_episodes_draw_bounded_restore_times() {
    let case = bundled::case14();
    let cfg = ScenarioConfig {
        seed: 2,
        restore_time_max: 4,
        ..ScenarioConfig::default()
    };
    let ga = dispatchgen::black_start::GAConfig {
        population: 16,
        generations: 20,
        ..Default::default()
    };
    let a = generate_black_start(&case, &cfg, &ga, 3).unwrap();
    assert_eq!(a, generate_black_start(&case, &cfg, &ga, 3).unwrap());
    assert_eq!(a.restore_times.len(), case.branches.len());
    assert!(a
        .restore_times
        .iter()
        .all(|&t| (1.0..=4.0).contains(&t) && t.fract() == 0.0));
    assert_ne!(
        a.restore_times,
        generate_black_start(&case, &cfg, &ga, 4)
            .unwrap()
            .restore_times
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn outages_come_from_the_pool(seed in 0u64..1_000_000, index in 0u64..1_000) {
        let case = bundled::case14();
        let cfg = ScenarioConfig { seed, ..ScenarioConfig::default() };
        let s = generate_monitoring(&case, &cfg, index).unwrap();
        let sampled = s.sample.apply(&case);
        let ranked = rank_by_loading(&sampled, &loading_ratios(&sampled, &s.pre.solution));
        prop_assert_eq!(&s.pool, &ranked[..cfg.disconnect_pool].to_vec());
        prop_assert!(s.pool.contains(&s.disconnected_line));
        for (m, bus) in s.sample.multiplier.iter().zip(&case.buses) {
            if bus.has_demand() {
                prop_assert!(*m >= cfg.load_range.0 && *m <= cfg.load_range.1);
            } else {
                prop_assert_eq!(*m, 1.0);
            }
        }
    }
}
