use serde::{Deserialize, Serialize};

use super::{CorpusError, DocChunk};
use crate::instruct::InstructionRecord;

/// Substrings that mark a chunk as containing formulas.
pub const FORMULA_MARKERS: [&str; 5] = ["$", "\\(", "\\[", "\\begin{equation", "\\begin{align"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptKind {
    QuestionGeneration,
    Augmentation,
}

/// One prompt in a batch file for external submission.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptRequest {
    pub request_id: u64,
    pub kind: PromptKind,
    /// `doc_id#chunk_index` for chunks, `seed/sample_index` for records.
    pub source: String,
    pub prompt: String,
}

pub fn has_formula(text: &str) -> bool {
    FORMULA_MARKERS.iter().any(|m| text.contains(m))
}

const QA_HEADER: &str = "You are a power system expert writing training questions for power dispatch.\n\
Use only the content of the passage below together with the power system dispatch problems it bears on. \
Do not introduce facts that the passage does not support.\n\
Write question and answer pairs that test understanding of the passage.\n";

const QA_CALCULATION: &str = "The passage contains formulas. For every calculation question, give detailed \
step-by-step reasoning: state the known quantities, apply each formula in turn and show the intermediate \
results before the final answer.\n";

const QA_FOOTER: &str = "Return each pair as a JSON object with \"question\" and \"answer\" fields, one object per line.\n";

/// Knowledge-guided question-generation prompt for one chunk.
pub fn build_qa_prompt(chunk: &DocChunk) -> Result<String, CorpusError> {
    if chunk.text.trim().is_empty() {
        return Err(CorpusError::EmptyChunk {
            doc_id: chunk.doc_id.clone(),
        });
    }
    let mut p = String::from(QA_HEADER);
    if has_formula(&chunk.text) {
        p.push_str(QA_CALCULATION);
    }
    p.push_str(QA_FOOTER);
    p.push_str("\nPassage:\n<<<\n");
    p.push_str(&chunk.text);
    p.push_str("\n>>>\n");
    Ok(p)
}

const AUGMENT_HEADER: &str = "You are a power system expert reviewing a training example for power dispatch.\n\
Rewrite the example below in three different ways. Each version must describe the same concept or problem \
with a different sentence structure or a broader background, and must keep every number, unit and conclusion.\n\
Then check each version: verify its logical reasoning and recompute every calculation step. Discard any \
version whose reasoning or results differ from the original or that could lead to an unsafe operating decision.\n\
Return the kept versions as JSON objects with \"instruction\", \"input\" and \"output\" fields, one object per line.\n";

fn fenced(p: &mut String, label: &str, body: &str) {
    p.push('\n');
    p.push_str(label);
    p.push_str(":\n<<<\n");
    p.push_str(body);
    p.push_str("\n>>>\n");
}

/// Augmentation prompt embedding the record's instruction, input and output.
pub fn build_augmentation_prompt(record: &InstructionRecord) -> Result<String, CorpusError> {
    if !record.is_valid() {
        return Err(CorpusError::InvalidRecord(
            "instruction and output must be non-empty".into(),
        ));
    }
    let mut p = String::from(AUGMENT_HEADER);
    fenced(&mut p, "Instruction", &record.instruction);
    if !record.input.is_empty() {
        fenced(&mut p, "Input", &record.input);
    }
    fenced(&mut p, "Output", &record.output);
    Ok(p)
}

/// Question-generation requests numbered from 0 in chunk order.
pub fn qa_requests(chunks: &[DocChunk]) -> Result<Vec<PromptRequest>, CorpusError> {
    chunks
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(PromptRequest {
                request_id: i as u64,
                kind: PromptKind::QuestionGeneration,
                source: format!("{}#{}", c.doc_id, c.chunk_index),
                prompt: build_qa_prompt(c)?,
            })
        })
        .collect()
}

/// Augmentation requests numbered from 0 in record order.
pub fn augmentation_requests(
    records: &[InstructionRecord],
) -> Result<Vec<PromptRequest>, CorpusError> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Ok(PromptRequest {
                request_id: i as u64,
                kind: PromptKind::Augmentation,
                source: format!("{}/{}", r.meta.seed, r.meta.sample_index),
                prompt: build_augmentation_prompt(r)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instruct::{RecordMeta, TaskKind};

    fn chunk(text: &str) -> DocChunk {
        DocChunk {
            doc_id: "book".into(),
            chunk_index: 0,
            text: text.into(),
            token_estimate: 0,
            overlap_bytes: 0,
        }
    }

    #[test]
    fn chunk_is_inlined_once() {
        let text = "The swing equation relates rotor acceleration to the power imbalance.";
        let p = build_qa_prompt(&chunk(text)).unwrap();
        assert_eq!(p.matches(text).count(), 1);
        assert!(!p.contains(QA_CALCULATION));
    }

    #[test]
    fn formula_adds_the_reasoning_clause() {
        for text in [
            "Losses are $3I^2R$.",
            "We have \\(P = VI\\).",
            "\\begin{equation} x \\end{equation}",
        ] {
            assert!(
                build_qa_prompt(&chunk(text))
                    .unwrap()
                    .contains(QA_CALCULATION),
                "{text}"
            );
        }
    }

    #[test]
    fn empty_chunk_is_rejected() {
        assert!(matches!(
            build_qa_prompt(&chunk("  ")),
            Err(CorpusError::EmptyChunk { .. })
        ));
    }

    #[test]
    fn augmentation_embeds_the_record() {
        let r = InstructionRecord {
            instruction: "Explain droop control.".into(),
            input: String::new(),
            output: "Droop shares load changes in proportion to rating.".into(),
            meta: RecordMeta {
                task: TaskKind::Knowledge,
                case_name: String::new(),
                seed: 1,
                sample_index: 4,
                opf_method: String::new(),
                template_version: String::new(),
            },
        };
        let p = build_augmentation_prompt(&r).unwrap();
        assert!(p.contains(&r.instruction) && p.contains(&r.output));
        assert!(!p.contains("Input:"));
        assert_eq!(
            augmentation_requests(std::slice::from_ref(&r)).unwrap()[0].source,
            "1/4"
        );
        let empty = InstructionRecord {
            output: String::new(),
            ..r
        };
        assert!(matches!(
            build_augmentation_prompt(&empty),
            Err(CorpusError::InvalidRecord(_))
        ));
    }
}
