//! Dispatch records mixed with the bundled knowledge set at 85%, written
//! as JSONL with a YAML manifest.
//!
//! cargo run --example build_dataset [-- <out dir> <total>]

use std::path::PathBuf;

use dispatchgen::grid::bundled;
use dispatchgen::instruct::{
    build_dataset, parse_knowledge, write_jsonl, DatasetConfig, BUNDLED_KNOWLEDGE,
};

fn main() {
    let out = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "dataset-out".into()),
    );
    let total = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let knowledge = parse_knowledge(BUNDLED_KNOWLEDGE.as_bytes()).unwrap();
    let cases = [bundled::case14(), bundled::case30()];
    let (records, manifest) =
        build_dataset(&cases, knowledge, &DatasetConfig::default(), total).unwrap();
    std::fs::create_dir_all(&out).unwrap();
    write_jsonl(&records, &out.join("dataset.jsonl")).unwrap();
    std::fs::write(out.join("manifest.yaml"), manifest.to_yaml()).unwrap();
    println!(
        "{} records, dispatch fraction {:.3}, dispatch tokens in/out {:.1}/{:.1}, knowledge {:.1}/{:.1}",
        manifest.total,
        manifest.dispatch_fraction,
        manifest.tokens.dispatch.mean_input_tokens,
        manifest.tokens.dispatch.mean_output_tokens,
        manifest.tokens.knowledge.mean_input_tokens,
        manifest.tokens.knowledge.mean_output_tokens
    );
    println!("wrote {}", out.display());
}
