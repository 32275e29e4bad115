//! Text-corpus preparation: coreset document selection, boundary-respecting
//! segmentation and prompt emission for an external language model.

mod adapter;
mod prompt;
mod segment;
mod select;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use adapter::{submit_batch, AdapterError, LlmAdapter, MockAdapter, PromptResponse};
pub use prompt::{
    augmentation_requests, build_augmentation_prompt, build_qa_prompt, has_formula, qa_requests,
    PromptKind, PromptRequest, FORMULA_MARKERS,
};
pub use segment::{reassemble, segment};
pub use select::{k_center_greedy, SelectionResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    pub doc_id: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocChunk {
    pub doc_id: String,
    pub chunk_index: usize,
    pub text: String,
    pub token_estimate: usize,
    /// Leading bytes of `text` repeated from the end of the previous chunk.
    pub overlap_bytes: usize,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("no embedding vectors given")]
    NoVectors,
    #[error("k must lie in 1..={n}, got {k}")]
    InvalidK { k: usize, n: usize },
    #[error("start document {0:?} is not among the vectors")]
    UnknownStart(String),
    #[error("vector {doc_id:?} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        doc_id: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate document id {0:?}")]
    DuplicateDoc(String),
    #[error("max_tokens ({max_tokens}) must exceed overlap ({overlap})")]
    InvalidBudget { max_tokens: usize, overlap: usize },
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("empty chunk from {doc_id:?}")]
    EmptyChunk { doc_id: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
}

fn read_lines<T: DeserializeOwned, R: BufRead>(input: R) -> Result<Vec<T>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|source| CorpusError::Parse {
                line: i + 1,
                source,
            })?,
        );
    }
    Ok(out)
}

fn write_lines<T: Serialize>(items: &[T], path: &Path) -> Result<(), CorpusError> {
    let mut out = BufWriter::new(File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut out, item).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// One `{"doc_id": ..., "values": [...]}` object per line.
pub fn read_embeddings_from<R: BufRead>(input: R) -> Result<Vec<EmbeddingVector>, CorpusError> {
    read_lines(input)
}

pub fn read_embeddings(path: &Path) -> Result<Vec<EmbeddingVector>, CorpusError> {
    read_embeddings_from(BufReader::new(File::open(path)?))
}

pub fn write_chunks(chunks: &[DocChunk], path: &Path) -> Result<(), CorpusError> {
    write_lines(chunks, path)
}

pub fn read_chunks(path: &Path) -> Result<Vec<DocChunk>, CorpusError> {
    read_lines(BufReader::new(File::open(path)?))
}

pub fn write_prompts(prompts: &[PromptRequest], path: &Path) -> Result<(), CorpusError> {
    write_lines(prompts, path)
}

pub fn read_prompts(path: &Path) -> Result<Vec<PromptRequest>, CorpusError> {
    read_lines(BufReader::new(File::open(path)?))
}
