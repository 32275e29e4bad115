//! K-center greedy selection over document embeddings.
//!
//! cargo run --example coreset_selection [-- <embeddings.jsonl> <k> <start id>]
//!
//! Without arguments a random 2-D point set is used.

use std::path::Path;

use dispatchgen::corpus::{k_center_greedy, read_embeddings, EmbeddingVector};
use dispatchgen::rng::{Family, Substream};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let vectors = match args.first() {
        Some(path) => read_embeddings(Path::new(path)).expect("readable embeddings file"),
        None => {
            let mut rng = Substream::new(1, Family::Corpus, 0);
            (0..40)
                .map(|i| EmbeddingVector {
                    doc_id: format!("doc{i:02}"),
                    values: vec![rng.unit(), rng.unit()],
                })
                .collect()
        }
    };
    let k = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let start = args
        .get(2)
        .cloned()
        .unwrap_or_else(|| vectors[0].doc_id.clone());
    for k in 1..=k {
        let r = k_center_greedy(&vectors, k, &start).unwrap();
        println!(
            "k={k}: radius {:.4}, chosen {}",
            r.coverage_radius,
            r.chosen.join(" ")
        );
    }
}
