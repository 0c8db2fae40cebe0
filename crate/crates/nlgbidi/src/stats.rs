//! Descriptive statistics over a corpus.
//!
//! Lengths are measured in characters on the raw, pre-normalization text,
//! since cleaning changes lengths and the point of these numbers is to
//! describe the data as it arrived. All accumulation runs sequentially in
//! record order so results are reproducible bit-for-bit.

use crate::model::Record;
use crate::pipeline::Corpus;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("corpus has no records")]
    EmptyCorpus,
}

/// Which text column to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthField {
    /// Every reference sentence is one sample.
    ReferenceText,
    /// Each record's raw flat-serialized triples are one sample.
    SerializedRdf,
}

/// Population (divide by n) or sample (divide by n−1) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StdMode {
    #[default]
    Population,
    Sample,
}

/// Character-length distribution summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthStats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub max: f64,
}

/// One relation and how many triples use it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFrequency {
    pub relation: String,
    pub count: usize,
}

/// Per-record shape: reference fan-out and triple-set size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordShape {
    pub refs_per_record_mean: f64,
    pub triples_per_set_mean: f64,
    pub triples_per_set_std: f64,
}

/// The raw flat rendering of a record's triples, built from the terms as
/// they appeared in the input (no folding).
pub fn raw_serialized(record: &Record) -> String {
    record
        .triples()
        .iter()
        .map(|t| {
            format!(
                "{} | {} | {} ;",
                t.subject().raw(),
                t.relation().raw(),
                t.object().raw()
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn mean_of(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    for v in values {
        sum += v;
    }
    sum / values.len() as f64
}

fn std_of(values: &[f64], mean: f64, mode: StdMode) -> f64 {
    let denom = match mode {
        StdMode::Population => values.len() as f64,
        StdMode::Sample => (values.len() - 1) as f64,
    };
    if denom <= 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for v in values {
        let d = v - mean;
        sum += d * d;
    }
    (sum / denom).sqrt()
}

/// Percentile by linear interpolation between order statistics: the value
/// at rank (n−1)·q, interpolating between the two neighbors.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = (n - 1) as f64 * q;
    let lo = rank.floor() as usize;
    let frac = rank - lo as f64;
    if lo + 1 >= n {
        sorted[n - 1]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

fn summarize(lengths: &[f64], mode: StdMode) -> LengthStats {
    let mean = mean_of(lengths);
    let std = std_of(lengths, mean, mode);
    let mut sorted = lengths.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    LengthStats {
        mean,
        std,
        min: sorted[0],
        p25: percentile(&sorted, 0.25),
        p50: percentile(&sorted, 0.50),
        p75: percentile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    }
}

/// Character-length statistics for one text column, with a configurable
/// standard-deviation form.
pub fn length_stats_with(
    corpus: &Corpus,
    field: LengthField,
    mode: StdMode,
) -> Result<LengthStats, StatsError> {
    if corpus.is_empty() {
        return Err(StatsError::EmptyCorpus);
    }
    let mut lengths = Vec::new();
    for record in corpus.iter() {
        match field {
            LengthField::ReferenceText => {
                for r in record.references() {
                    lengths.push(r.chars().count() as f64);
                }
            }
            LengthField::SerializedRdf => {
                lengths.push(raw_serialized(record).chars().count() as f64);
            }
        }
    }
    Ok(summarize(&lengths, mode))
}

/// [`length_stats_with`] using the population standard deviation.
pub fn length_stats(corpus: &Corpus, field: LengthField) -> Result<LengthStats, StatsError> {
    length_stats_with(corpus, field, StdMode::Population)
}

/// Canonical relation counts, most frequent first, ties alphabetical.
pub fn relation_frequency(corpus: &Corpus) -> Result<Vec<RelationFrequency>, StatsError> {
    if corpus.is_empty() {
        return Err(StatsError::EmptyCorpus);
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for record in corpus.iter() {
        for triple in record.triples().iter() {
            *counts.entry(triple.relation().canonical()).or_insert(0) += 1;
        }
    }
    let mut rows: Vec<RelationFrequency> = counts
        .into_iter()
        .map(|(relation, count)| RelationFrequency {
            relation: relation.to_string(),
            count,
        })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then(a.relation.cmp(&b.relation)));
    Ok(rows)
}

/// Reference fan-out and triples-per-set statistics, with a configurable
/// standard-deviation form.
pub fn record_shape_stats_with(corpus: &Corpus, mode: StdMode) -> Result<RecordShape, StatsError> {
    if corpus.is_empty() {
        return Err(StatsError::EmptyCorpus);
    }
    let refs: Vec<f64> = corpus
        .iter()
        .map(|r| r.references().len() as f64)
        .collect();
    let triples: Vec<f64> = corpus.iter().map(|r| r.triples().len() as f64).collect();
    let triples_mean = mean_of(&triples);
    Ok(RecordShape {
        refs_per_record_mean: mean_of(&refs),
        triples_per_set_mean: triples_mean,
        triples_per_set_std: std_of(&triples, triples_mean, mode),
    })
}

/// [`record_shape_stats_with`] using the population standard deviation.
pub fn record_shape_stats(corpus: &Corpus) -> Result<RecordShape, StatsError> {
    record_shape_stats_with(corpus, StdMode::Population)
}
