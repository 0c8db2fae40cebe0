//! Corpus loading and training-stream construction.
//!
//! A corpus is JSON Lines of records. From it, per-reference task
//! examples are built for each direction, interleaved ABAB into one
//! multi-task stream, and optionally mixed with validated synthetic
//! annotations at seeded pseudo-random positions so every stream is
//! reproducible bit-for-bit from its inputs and seed.

use crate::linearize::{make_task_example, parse_triples, LinearizeError, TaskExample, TaskKind};
use crate::model::{Record, RecordJson, Source, Split, TripleSet};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot interleave two empty streams")]
    BothEmpty,
    #[error("cannot inject into an empty base stream")]
    EmptyBase,
    #[error("cannot read {path}: {source}")]
    IoFailure {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    SchemaViolation { line: usize, message: String },
    #[error("split counts (train, validation, test) are {actual:?}, expected {expected:?}")]
    SplitCountMismatch {
        expected: (usize, usize, usize),
        actual: (usize, usize, usize),
    },
}

/// An in-memory corpus of canonicalized records.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    records: Vec<Record>,
}

impl Corpus {
    pub fn new(records: Vec<Record>) -> Self {
        Corpus { records }
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Record> {
        self.records.iter()
    }

    /// Record counts per split as (train, validation, test).
    pub fn split_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for r in &self.records {
            match r.split() {
                Split::Train => counts.0 += 1,
                Split::Validation => counts.1 += 1,
                Split::Test => counts.2 += 1,
            }
        }
        counts
    }
}

/// Loads a JSON Lines corpus file, canonicalizing every record.
///
/// Blank lines are skipped; any other malformed line is a
/// [`PipelineError::SchemaViolation`] carrying its 1-based line number.
/// When `expected_counts` is given, the loaded (train, validation, test)
/// sizes must match exactly.
pub fn load_corpus(
    path: &Path,
    expected_counts: Option<(usize, usize, usize)>,
) -> Result<Corpus, PipelineError> {
    let file = std::fs::File::open(path).map_err(|source| PipelineError::IoFailure {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| PipelineError::IoFailure {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let json: RecordJson =
            serde_json::from_str(&line).map_err(|e| PipelineError::SchemaViolation {
                line: i + 1,
                message: e.to_string(),
            })?;
        let record = json
            .into_record()
            .map_err(|e| PipelineError::SchemaViolation {
                line: i + 1,
                message: e.to_string(),
            })?;
        records.push(record);
    }
    let corpus = Corpus::new(records);
    if let Some(expected) = expected_counts {
        let actual = corpus.split_counts();
        if actual != expected {
            return Err(PipelineError::SplitCountMismatch { expected, actual });
        }
    }
    Ok(corpus)
}

/// Builds the per-reference example stream for one task, in record order
/// then reference order.
pub fn task_stream(corpus: &Corpus, task: TaskKind, with_prefix: bool) -> Vec<TaskExample> {
    let mut out = Vec::new();
    for record in corpus.iter() {
        for ref_index in 0..record.references().len() {
            let example = make_task_example(record, task, ref_index, with_prefix)
                .expect("records always hold at least one triple and reference");
            out.push(example);
        }
    }
    out
}

/// Alternates the two task streams A,B,A,B,… starting with the
/// data-to-sentence stream; when one runs out, the rest of the other is
/// appended in order.
pub fn interleave(
    d2s_examples: &[TaskExample],
    s2d_examples: &[TaskExample],
) -> Result<Vec<TaskExample>, PipelineError> {
    if d2s_examples.is_empty() && s2d_examples.is_empty() {
        return Err(PipelineError::BothEmpty);
    }
    let mut out = Vec::with_capacity(d2s_examples.len() + s2d_examples.len());
    let mut a = d2s_examples.iter();
    let mut b = s2d_examples.iter();
    loop {
        match (a.next(), b.next()) {
            (Some(x), Some(y)) => {
                out.push(x.clone());
                out.push(y.clone());
            }
            (Some(x), None) => {
                out.push(x.clone());
                out.extend(a.cloned());
                break;
            }
            (None, Some(y)) => {
                out.push(y.clone());
                out.extend(b.cloned());
                break;
            }
            (None, None) => break,
        }
    }
    Ok(out)
}

/// SplitMix64: the 64-bit mixing generator used for all seeded choices.
/// The constants are the published ones (increment 0x9E3779B97F4A7C15,
/// multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB), so any
/// reimplementation reproduces the same stream from the same seed.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Draw in [0, bound) by modulo; bounds here are corpus-sized, far
    /// below 2^64, so the bias is irrelevant next to reproducibility.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// Chooses `k` distinct positions in [0, n) by a partial Fisher–Yates
/// shuffle over a virtual identity array, then sorts them ascending.
fn choose_positions(rng: &mut SplitMix64, n: usize, k: usize) -> Vec<usize> {
    let mut overrides: HashMap<usize, usize> = HashMap::new();
    let mut chosen = Vec::with_capacity(k);
    for i in 0..k {
        let j = i + rng.below((n - i) as u64) as usize;
        let vi = *overrides.get(&i).unwrap_or(&i);
        let vj = *overrides.get(&j).unwrap_or(&j);
        overrides.insert(j, vi);
        overrides.insert(i, vj);
        chosen.push(vj);
    }
    chosen.sort_unstable();
    chosen
}

/// Scatters synthetic examples through the base stream at seeded
/// positions, preserving relative order within each input.
pub fn inject_synthetic(
    base: &[TaskExample],
    synthetic: &[TaskExample],
    seed: u64,
) -> Result<Vec<TaskExample>, PipelineError> {
    if base.is_empty() {
        return Err(PipelineError::EmptyBase);
    }
    if synthetic.is_empty() {
        return Ok(base.to_vec());
    }
    let total = base.len() + synthetic.len();
    let mut rng = SplitMix64::new(seed);
    let positions = choose_positions(&mut rng, total, synthetic.len());

    let mut out = Vec::with_capacity(total);
    let mut next_synthetic = positions.iter().peekable();
    let mut base_iter = base.iter();
    let mut synth_iter = synthetic.iter();
    for index in 0..total {
        if next_synthetic.peek() == Some(&&index) {
            next_synthetic.next();
            out.push(synth_iter.next().expect("one synthetic per position").clone());
        } else {
            out.push(base_iter.next().expect("base fills remaining slots").clone());
        }
    }
    Ok(out)
}

/// One line of a synthetic-annotation ingestion file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticEnvelope {
    pub sentence: String,
    pub annotation: String,
    #[serde(default)]
    pub blocked: bool,
}

/// Why one envelope was not turned into a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectionReason {
    /// The upstream safety filter replaced the output.
    ContentFiltered,
    /// The annotation text is empty.
    EmptyAnnotation,
    /// The annotation does not parse as triples.
    MalformedExpression(LinearizeError),
}

/// Tallies for one ingestion run. Empty annotations count as malformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestionReport {
    pub requested: usize,
    pub content_filtered: usize,
    pub malformed: usize,
    pub accepted: usize,
}

/// Turns one envelope into a record, or says why not.
///
/// Accepts exactly when the annotation parses as one or more triples;
/// the source sentence becomes the record's single reference, tagged as
/// synthetic training data.
pub fn validate_synthetic(
    envelope: &SyntheticEnvelope,
    id: u64,
) -> Result<Record, RejectionReason> {
    if envelope.blocked {
        return Err(RejectionReason::ContentFiltered);
    }
    if envelope.annotation.trim().is_empty() {
        return Err(RejectionReason::EmptyAnnotation);
    }
    let triples: TripleSet =
        parse_triples(&envelope.annotation).map_err(RejectionReason::MalformedExpression)?;
    Record::new(
        id,
        triples,
        vec![envelope.sentence.clone()],
        Split::Train,
        Source::WikibioSynthetic,
    )
    .map_err(|e| RejectionReason::MalformedExpression(LinearizeError::MalformedTriple {
        segment: e.to_string(),
        index: 0,
    }))
}

/// Validates a batch of envelopes. Record ids are `start_id` plus the
/// envelope's position, so accepted records keep stable provenance.
pub fn ingest_synthetic(
    envelopes: &[SyntheticEnvelope],
    start_id: u64,
) -> (Vec<Record>, IngestionReport) {
    let mut accepted = Vec::new();
    let mut report = IngestionReport {
        requested: envelopes.len(),
        content_filtered: 0,
        malformed: 0,
        accepted: 0,
    };
    for (i, envelope) in envelopes.iter().enumerate() {
        match validate_synthetic(envelope, start_id + i as u64) {
            Ok(record) => accepted.push(record),
            Err(RejectionReason::ContentFiltered) => report.content_filtered += 1,
            Err(_) => report.malformed += 1,
        }
    }
    report.accepted = accepted.len();
    (accepted, report)
}

/// Reads a TaskExample JSON Lines stream file.
pub fn read_task_examples(path: &Path) -> Result<Vec<TaskExample>, PipelineError> {
    let file = std::fs::File::open(path).map_err(|source| PipelineError::IoFailure {
        path: path.display().to_string(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| PipelineError::IoFailure {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let example: TaskExample =
            serde_json::from_str(&line).map_err(|e| PipelineError::SchemaViolation {
                line: i + 1,
                message: e.to_string(),
            })?;
        out.push(example);
    }
    Ok(out)
}

/// Writes a TaskExample stream as JSON Lines.
pub fn write_task_examples<W: Write>(
    mut writer: W,
    examples: &[TaskExample],
) -> std::io::Result<()> {
    for example in examples {
        let line = serde_json::to_string(example).expect("task examples serialize");
        writeln!(writer, "{line}")?;
    }
    Ok(())
}
