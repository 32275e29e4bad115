//! N-1 monitoring scenarios with safety labels, one JSON line each.
//!
//! cargo run --example monitoring_scenarios [-- <seed> <samples>]

use dispatchgen::grid::bundled;
use dispatchgen::scenario::{generate_batch, generate_monitoring, ScenarioConfig};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer argument"));
    let seed = args.next().unwrap_or(42);
    let samples = args.next().unwrap_or(5) as usize;
    let case = bundled::case14();
    let cfg = ScenarioConfig {
        seed,
        samples,
        ..ScenarioConfig::default()
    };
    for result in generate_batch(&cfg, |i| generate_monitoring(&case, &cfg, i)) {
        match result {
            Ok(s) => {
                eprintln!(
                    "sample {}: line {} out, {:?}",
                    s.index, s.disconnected_line, s.label
                );
                println!("{}", serde_json::to_string(&s).unwrap());
            }
            Err(skip) => eprintln!("sample {} skipped: {}", skip.index, skip.reason),
        }
    }
}
