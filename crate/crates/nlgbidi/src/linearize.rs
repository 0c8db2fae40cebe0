//! Flat text serialization of triple sets and its inverse.
//!
//! The wire grammar is `term " | " term " | " term " ;"` per triple, with
//! triples joined by single spaces. Emission is canonical; parsing is
//! lenient about spacing and a missing final terminator, because model
//! output is routinely truncated mid-stream.
//!
//! Multi-task training pairs carry a control prefix selecting the task:
//! `d2t 0:` for data-to-sentence, `t2d 1:` for sentence-to-data.

use crate::model::{fold_text, Record, Triple, TripleSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinearizeError {
    #[error("cannot serialize an empty triple set")]
    EmptyTripleSet,
    #[error("segment {index} is not a triple: {segment:?}")]
    MalformedTriple { segment: String, index: usize },
    #[error("no triple could be recovered from the output")]
    EmptyOutput,
    #[error("record {record_id} has {len} references, index {ref_index} is out of range")]
    ReferenceIndexOutOfRange {
        record_id: u64,
        ref_index: usize,
        len: usize,
    },
}

/// The two directions of the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TaskKind {
    /// Structured data in, natural language out (generation).
    #[serde(rename = "d2s")]
    D2s,
    /// Natural language in, structured data out (semantic parsing).
    #[serde(rename = "s2d")]
    S2d,
}

impl TaskKind {
    /// The literal control prefix prepended to model input for this task.
    pub fn prefix(self) -> &'static str {
        match self {
            TaskKind::D2s => "d2t 0:",
            TaskKind::S2d => "t2d 1:",
        }
    }
}

impl std::fmt::Display for TaskKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TaskKind::D2s => f.write_str("d2s"),
            TaskKind::S2d => f.write_str("s2d"),
        }
    }
}

/// One serialized input/output training pair.
///
/// Stored one JSON object per line in stream files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskExample {
    pub task: TaskKind,
    pub input: String,
    pub target: String,
    pub record_id: u64,
}

/// Renders one triple as `subject | relation | object ;` using canonical
/// term forms.
pub fn serialize_triple(triple: &Triple) -> String {
    format!("{} ;", triple.canonical_key())
}

/// Renders a triple set in the flat wire grammar.
pub fn serialize_triples(ts: &TripleSet) -> Result<String, LinearizeError> {
    if ts.is_empty() {
        return Err(LinearizeError::EmptyTripleSet);
    }
    Ok(ts
        .iter()
        .map(serialize_triple)
        .collect::<Vec<_>>()
        .join(" "))
}

/// Parses flat model output back into a [`TripleSet`].
///
/// Splits on `;` terminators, then on vertical bars, trimming and
/// canonicalizing each term. A missing final terminator is accepted; a
/// segment that does not yield exactly three non-empty terms is an error
/// carrying the segment text and its index.
pub fn parse_triples(flat: &str) -> Result<TripleSet, LinearizeError> {
    let mut segments: Vec<&str> = flat.split(';').collect();
    if let Some(last) = segments.last() {
        if last.trim().is_empty() {
            segments.pop();
        }
    }
    if segments.is_empty() {
        return Err(LinearizeError::EmptyOutput);
    }
    let mut triples = Vec::with_capacity(segments.len());
    for (index, segment) in segments.iter().enumerate() {
        let malformed = || LinearizeError::MalformedTriple {
            segment: segment.trim().to_string(),
            index,
        };
        let parts: Vec<&str> = segment.split('|').collect();
        if parts.len() != 3 {
            return Err(malformed());
        }
        let triple =
            Triple::new(parts[0].trim(), parts[1].trim(), parts[2].trim()).map_err(|_| malformed())?;
        triples.push(triple);
    }
    Ok(TripleSet::new(triples))
}

/// Splits a control prefix off the front of a serialized input, if present.
///
/// The prefix is emitted with one following space, but any amount of
/// whitespace after it is stripped here.
pub fn strip_task_prefix(text: &str) -> (Option<TaskKind>, &str) {
    for kind in [TaskKind::D2s, TaskKind::S2d] {
        if let Some(rest) = text.strip_prefix(kind.prefix()) {
            return (Some(kind), rest.trim_start());
        }
    }
    (None, text)
}

/// Builds the input/target pair for one record, task, and reference.
///
/// Reference sentences are folded to canonical text on both tasks, so the
/// sentence side of a pair is lowercase ASCII just like the data side.
pub fn make_task_example(
    record: &Record,
    task: TaskKind,
    ref_index: usize,
    with_prefix: bool,
) -> Result<TaskExample, LinearizeError> {
    let references = record.references();
    if ref_index >= references.len() {
        return Err(LinearizeError::ReferenceIndexOutOfRange {
            record_id: record.id(),
            ref_index,
            len: references.len(),
        });
    }
    let sentence = fold_text(&references[ref_index]);
    let data = serialize_triples(record.triples())?;
    let (mut input, target) = match task {
        TaskKind::D2s => (data, sentence),
        TaskKind::S2d => (sentence, data),
    };
    if with_prefix {
        input = format!("{} {}", task.prefix(), input);
    }
    Ok(TaskExample {
        task,
        input,
        target,
        record_id: record.id(),
    })
}
