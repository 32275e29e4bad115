//! Splits a document into overlapping chunks, builds question-generation
//! prompts and runs them through the mock adapter.
//!
//! cargo run --example segment_and_prompt [-- <text file> <max tokens> <overlap>]

use dispatchgen::corpus::{qa_requests, reassemble, segment, submit_batch, MockAdapter};

const SAMPLE: &str = "Economic dispatch allocates demand among online units so that total cost is least. \
Each unit has a quadratic cost curve.\n\n\
At the optimum every unit not at a limit runs at the same incremental cost, $\\lambda = 2 a_i P_i + b_i$. \
Units at a limit are held there.\n\n\
Transmission losses raise the demand the units must serve. A power flow gives the losses for a given dispatch, \
and the dispatch is repeated until the slack unit output settles.";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let text = match args.first() {
        Some(path) => std::fs::read_to_string(path).expect("readable text file"),
        None => SAMPLE.to_string(),
    };
    let max_tokens = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(48);
    let overlap = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(6);
    let chunks = segment("sample", &text, max_tokens, overlap).unwrap();
    assert_eq!(reassemble(&chunks), text);
    for c in &chunks {
        println!(
            "chunk {} ({} tokens, {} overlap bytes): {:?}",
            c.chunk_index, c.token_estimate, c.overlap_bytes, c.text
        );
    }
    let requests = qa_requests(&chunks).unwrap();
    println!("\n--- first prompt\n{}", requests[0].prompt);
    for r in submit_batch(&MockAdapter, &requests, 4) {
        println!(
            "request {}: {}",
            r.request_id,
            r.response.or(r.error).unwrap_or_default()
        );
    }
}
