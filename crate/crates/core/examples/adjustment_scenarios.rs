//! Line-rating reductions on the most loaded branches and the corrective
//! redispatch that follows.
//!
//! cargo run --example adjustment_scenarios [-- <seed>]

use dispatchgen::grid::bundled;
use dispatchgen::scenario::{generate_adjustment, AdjustmentPost, ScenarioConfig};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let case = bundled::case30();
    let cfg = ScenarioConfig {
        seed,
        ..ScenarioConfig::default()
    };
    for index in 0..3 {
        let s = generate_adjustment(&case, &cfg, index).expect("case30 solves");
        println!("sample {index}:");
        for l in &s.reduced_lines {
            println!(
                "  branch {} ({} - {}): rating {:.1} -> {:.1} MVA, pre flow {:.1} MVA",
                l.branch, l.from_bus.0, l.to_bus.0, l.basis_rate, l.new_rate, l.pre_flow_mva
            );
        }
        match &s.post {
            AdjustmentPost::Solved { point } => {
                println!(
                    "  redispatched cost {:.2}/h, {} violations left",
                    point.dispatch.total_cost,
                    point.violations.len()
                );
            }
            other => println!("  {other:?}"),
        }
        for a in s.required_adjustments.iter().flatten() {
            println!(
                "  G{} at bus {}: {:+.3} MW",
                a.generator + 1,
                a.bus.0,
                a.delta_mw
            );
        }
    }
}
