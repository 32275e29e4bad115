//! Renders one instruction record for each dispatch task on case14.
//!
//! cargo run --example render_records [-- <seed>]

use dispatchgen::black_start::GAConfig;
use dispatchgen::grid::bundled;
use dispatchgen::instruct::{build_dispatch_records, DatasetConfig};
use dispatchgen::scenario::ScenarioConfig;

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let cfg = DatasetConfig {
        scenario: ScenarioConfig {
            seed,
            ..ScenarioConfig::default()
        },
        ga: GAConfig::default(),
        dispatch_fraction: 1.0,
    };
    let batch =
        build_dispatch_records(&[bundled::case14()], &cfg, 5).expect("case14 scenarios solve");
    for r in &batch.records {
        println!("===== {:?} (sample {})", r.meta.task, r.meta.sample_index);
        println!(
            "--- instruction\n{}\n--- input\n{}\n--- output\n{}",
            r.instruction, r.input, r.output
        );
        println!(
            "--- tokens: input {}, output {}\n",
            r.input_tokens(),
            r.output_tokens()
        );
    }
}
