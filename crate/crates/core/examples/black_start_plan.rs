//! Genetic start-up ordering plus shortest-path bus energization, merged
//! into one restoration schedule.
//!
//! cargo run --example black_start_plan [-- <case> <seed>]

use dispatchgen::black_start::{plan_black_start, GAConfig, PlanDocument, RestorationEvent};
use dispatchgen::grid::bundled;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "case14".into());
    let seed = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let case = bundled::load(&name).expect("bundled case name");
    let cfg = GAConfig {
        seed,
        ..GAConfig::default()
    };
    let plan = plan_black_start(&case, &cfg).expect("at least one online generator");
    for e in &plan.merged {
        match e {
            RestorationEvent::EnergizeBus { time, bus } => {
                eprintln!("t={time:>5.1} energize bus {}", bus.0)
            }
            RestorationEvent::StartGenerator {
                time,
                generator,
                bus,
            } => {
                eprintln!("t={time:>5.1} start G{} at bus {}", generator + 1, bus.0)
            }
        }
    }
    print!("{}", PlanDocument::new(&case, &cfg, &plan).to_yaml());
}
