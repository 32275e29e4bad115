//! Instruction records rendered from scenarios, dataset mixing and JSONL I/O.

mod dataset;
mod mix;
mod template;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dataset::{
    build_dataset, build_dispatch_records, DatasetConfig, DispatchRecords, TASK_ROTATION,
};
pub use mix::{mix_dataset, DatasetManifest, MixError, PartStats, TOKEN_ESTIMATOR};
pub use template::{
    render, template_for, AnswerStep, InputField, Scenario, Template, TemplateError,
    TEMPLATE_VERSION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TaskKind {
    OperationAdjustment,
    OperationMonitoring,
    BlackStart,
    VoltageBoundary,
    GenerationCost,
    Knowledge,
}

impl TaskKind {
    pub const ALL: [TaskKind; 6] = [
        TaskKind::OperationAdjustment,
        TaskKind::OperationMonitoring,
        TaskKind::BlackStart,
        TaskKind::VoltageBoundary,
        TaskKind::GenerationCost,
        TaskKind::Knowledge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::OperationAdjustment => "OperationAdjustment",
            TaskKind::OperationMonitoring => "OperationMonitoring",
            TaskKind::BlackStart => "BlackStart",
            TaskKind::VoltageBoundary => "VoltageBoundary",
            TaskKind::GenerationCost => "GenerationCost",
            TaskKind::Knowledge => "Knowledge",
        }
    }

    pub fn is_dispatch(self) -> bool {
        self != TaskKind::Knowledge
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMeta {
    pub task: TaskKind,
    pub case_name: String,
    pub seed: u64,
    pub sample_index: u64,
    pub opf_method: String,
    pub template_version: String,
}

/// Field order here is the key order on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionRecord {
    pub instruction: String,
    pub input: String,
    pub output: String,
    pub meta: RecordMeta,
}

impl InstructionRecord {
    pub fn is_valid(&self) -> bool {
        !self.instruction.trim().is_empty() && !self.output.trim().is_empty()
    }

    /// Prompt-side length: instruction and input together.
    pub fn input_tokens(&self) -> usize {
        estimate_tokens(&self.instruction) + estimate_tokens(&self.input)
    }

    pub fn output_tokens(&self) -> usize {
        estimate_tokens(&self.output)
    }
}

/// Approximate token count: characters divided by four, rounded up.
pub fn estimate_tokens(text: &str) -> usize {
    text.chars().count().div_ceil(4)
}

#[derive(Debug, Error)]
pub enum JsonlError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
}

pub fn to_jsonl_line(record: &InstructionRecord) -> String {
    serde_json::to_string(record).expect("records serialize")
}

pub fn write_jsonl_to<W: Write>(records: &[InstructionRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        out.write_all(to_jsonl_line(r).as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// One record per line, each terminated by `\n`.
pub fn write_jsonl(records: &[InstructionRecord], path: &Path) -> Result<(), JsonlError> {
    write_jsonl_to(records, BufWriter::new(File::create(path)?))?;
    Ok(())
}

/// Parses records; blank lines are skipped.
pub fn read_jsonl_from<R: BufRead>(input: R) -> Result<Vec<InstructionRecord>, JsonlError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|source| JsonlError::Parse {
                line: i + 1,
                source,
            })?,
        );
    }
    Ok(out)
}

pub fn read_jsonl(path: &Path) -> Result<Vec<InstructionRecord>, JsonlError> {
    read_jsonl_from(BufReader::new(File::open(path)?))
}

/// Knowledge records shipped with the crate.
pub const BUNDLED_KNOWLEDGE: &str = include_str!("../../data/knowledge.jsonl");

/// Token statistics recorded when the bundled knowledge file was generated.
pub const BUNDLED_KNOWLEDGE_STATS: &str = include_str!("../../data/knowledge.stats.json");

/// Reads knowledge-part records and checks each is a valid `Knowledge` record.
pub fn parse_knowledge<R: BufRead>(input: R) -> Result<Vec<InstructionRecord>, JsonlError> {
    let records = read_jsonl_from(input)?;
    for (i, r) in records.iter().enumerate() {
        if r.meta.task != TaskKind::Knowledge {
            return Err(JsonlError::Invalid {
                line: i + 1,
                msg: format!("task {:?} in a knowledge file", r.meta.task),
            });
        }
        if !r.is_valid() {
            return Err(JsonlError::Invalid {
                line: i + 1,
                msg: "empty instruction or output".into(),
            });
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(i: u64) -> InstructionRecord {
        InstructionRecord {
            instruction: "Explain.".into(),
            input: format!("question \"{i}\"\nwith a newline"),
            output: "Answer ✓".into(),
            meta: RecordMeta {
                task: TaskKind::Knowledge,
                case_name: String::new(),
                seed: 0,
                sample_index: i,
                opf_method: String::new(),
                template_version: TEMPLATE_VERSION.into(),
            },
        }
    }

    #[test]
    fn token_estimate() {
        assert_eq!(estimate_tokens(""), 0);
        assert_eq!(estimate_tokens("12345678"), 2);
        assert_eq!(estimate_tokens("123456789"), 3);
    }

    #[test]
    fn jsonl_round_trip_and_layout() {
        let recs: Vec<_> = (0..3).map(record).collect();
        let mut buf = Vec::new();
        write_jsonl_to(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.ends_with("}\n") && !text.ends_with("\n\n"));
        assert!(text.starts_with(r#"{"instruction":"#));
        assert_eq!(read_jsonl_from(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn empty_write() {
        let mut buf = Vec::new();
        write_jsonl_to(&[], &mut buf).unwrap();
        assert!(buf.is_empty());
    }

    #[test]
    fn bundled_knowledge_parses() {
        let k = parse_knowledge(BUNDLED_KNOWLEDGE.as_bytes()).unwrap();
        assert!(k.len() >= 150);
    }

    #[test]
    fn bundled_knowledge_matches_recorded_stats() {
        let k = parse_knowledge(BUNDLED_KNOWLEDGE.as_bytes()).unwrap();
        let recorded: PartStats = serde_json::from_str(BUNDLED_KNOWLEDGE_STATS).unwrap();
        let live = PartStats::of(&k);
        assert_eq!(live.records, recorded.records);
        assert!((live.mean_input_tokens - recorded.mean_input_tokens).abs() < 1e-9);
        assert!((live.mean_output_tokens - recorded.mean_output_tokens).abs() < 1e-9);
        assert!((live.mean_input_tokens / 40.0 - 1.0).abs() < 0.1);
        assert!((live.mean_output_tokens / 234.0 - 1.0).abs() < 0.1);
    }

    #[test]
    fn knowledge_rejects_dispatch_tasks() {
        let mut r = record(0);
        r.meta.task = TaskKind::BlackStart;
        let line = to_jsonl_line(&r) + "\n";
        assert!(matches!(
            parse_knowledge(line.as_bytes()),
            Err(JsonlError::Invalid { line: 1, .. })
        ));
    }
}
