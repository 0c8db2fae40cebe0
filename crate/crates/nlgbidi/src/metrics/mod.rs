//! Scoring for both directions of the corpus.
//!
//! Sentence-to-data outputs are scored as sets of canonical triples
//! (exact F1) and by character edit distance under an optimal triple
//! alignment. Data-to-sentence outputs are scored with case-insensitive
//! multi-reference BLEU-4 and Rouge-L over a shared punctuation-splitting
//! tokenizer.

pub mod assignment;

use crate::linearize::serialize_triple;
use crate::model::TripleSet;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("gold set is empty; the record should be flagged, not scored")]
    EmptyGold,
    #[error("both prediction and gold are empty")]
    BothEmpty,
    #[error("no references to score against")]
    EmptyReferences,
    #[error("no reports to aggregate")]
    EmptyInput,
    #[error("cannot aggregate reports of different kinds")]
    MixedReportKinds,
}

/// Exact-match F1 over canonical triple strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F1Breakdown {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// One aligned pred/gold pair (or an unmatched triple on either side) and
/// its character edit distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDistance {
    pub pred_index: Option<usize>,
    pub gold_index: Option<usize>,
    pub distance: usize,
}

/// Edit-distance report for one record.
///
/// `total` sums matched-pair distances and full-length penalties for
/// unmatched triples; `whole_string_distance` is the plain edit distance
/// between the two flat serializations, reported alongside because either
/// convention is defensible and they differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditReport {
    pub per_triple_distances: Vec<PairDistance>,
    pub total: usize,
    pub mean_per_record: f64,
    pub whole_string_distance: usize,
}

/// Sentence-generation scores for one record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenScore {
    pub bleu4: f64,
    pub rouge_l: f64,
}

/// Per-record report, one of the three kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordScore {
    F1(F1Breakdown),
    Edit(EditReport),
    Gen(GenScore),
}

/// Corpus-level means; fields are `None` for kinds not aggregated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub records: usize,
    pub mean_f1: Option<f64>,
    pub zero_f1_records: Option<usize>,
    pub mean_edit_total: Option<f64>,
    pub mean_edit_per_triple: Option<f64>,
    pub mean_bleu4: Option<f64>,
    pub mean_rouge_l: Option<f64>,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic_mean(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        2.0 * a * b / (a + b)
    }
}

/// Compares predicted and gold triple sets as sets of canonical strings.
///
/// Division by zero yields 0 rather than adding a small epsilon to the
/// denominator, so an exact match scores exactly 1.
pub fn set_f1(pred: &TripleSet, gold: &TripleSet) -> Result<F1Breakdown, MetricsError> {
    if gold.is_empty() {
        return Err(MetricsError::EmptyGold);
    }
    let p = pred.canonical_set();
    let g = gold.canonical_set();
    let tp = p.intersection(&g).count();
    let fp = p.difference(&g).count();
    let fn_ = g.difference(&p).count();
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    Ok(F1Breakdown {
        true_positives: tp,
        false_positives: fp,
        false_negatives: fn_,
        precision,
        recall,
        f1: harmonic_mean(precision, recall),
    })
}

/// Unit-cost character Levenshtein distance.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Aligns predicted triples to gold triples by minimum total character
/// edit distance and reports per-pair distances.
///
/// Each triple is rendered with [`serialize_triple`]; an unmatched triple
/// on either side costs its full serialized length. The assignment makes
/// the total invariant under reordering of either set.
pub fn align_and_edit(pred: &TripleSet, gold: &TripleSet) -> Result<EditReport, MetricsError> {
    if pred.is_empty() && gold.is_empty() {
        return Err(MetricsError::BothEmpty);
    }
    let ps: Vec<String> = pred.iter().map(serialize_triple).collect();
    let gs: Vec<String> = gold.iter().map(serialize_triple).collect();
    let n = ps.len().max(gs.len());
    let cost: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (ps.get(i), gs.get(j)) {
                    (Some(p), Some(g)) => levenshtein(p, g) as u64,
                    (Some(p), None) => p.chars().count() as u64,
                    (None, Some(g)) => g.chars().count() as u64,
                    (None, None) => 0,
                })
                .collect()
        })
        .collect();
    let (_, row_to_col) = assignment::solve(&cost);

    let mut per_triple_distances = Vec::new();
    for (i, &j) in row_to_col.iter().enumerate().take(ps.len()) {
        per_triple_distances.push(PairDistance {
            pred_index: Some(i),
            gold_index: (j < gs.len()).then_some(j),
            distance: cost[i][j] as usize,
        });
    }
    let mut dropped_golds: Vec<(usize, usize)> = row_to_col
        .iter()
        .enumerate()
        .skip(ps.len())
        .filter(|(_, &j)| j < gs.len())
        .map(|(i, &j)| (j, cost[i][j] as usize))
        .collect();
    dropped_golds.sort_unstable();
    for (j, d) in dropped_golds {
        per_triple_distances.push(PairDistance {
            pred_index: None,
            gold_index: Some(j),
            distance: d,
        });
    }

    let total: usize = per_triple_distances.iter().map(|p| p.distance).sum();
    let mean_per_record = total as f64 / per_triple_distances.len() as f64;
    let whole_string_distance = levenshtein(&ps.join(" "), &gs.join(" "));
    Ok(EditReport {
        per_triple_distances,
        total,
        mean_per_record,
        whole_string_distance,
    })
}

/// Lowercases and splits text into word and punctuation tokens.
///
/// Every character that is neither alphanumeric nor whitespace becomes a
/// token of its own, so "Spanish." yields `["spanish", "."]`. BLEU and
/// Rouge share this stream, which is what makes both case-insensitive.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for ch in text.to_lowercase().chars() {
        if ch.is_alphanumeric() {
            word.push(ch);
        } else {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
            if !ch.is_whitespace() {
                tokens.push(ch.to_string());
            }
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

/// Multi-reference BLEU-4 with clipped modified precisions.
///
/// Zero-match orders are smoothed by halving: a counter k starts at 0 and
/// each zero-match order sets k ← k+1 and scores 1/(2^k · h_n) where h_n
/// is the hypothesis n-gram count. Orders with no hypothesis n-grams are
/// left out of the geometric mean. The brevity penalty uses the reference
/// length closest to the hypothesis, ties toward the shorter reference.
/// An empty hypothesis scores 0.
pub fn bleu4<S: AsRef<str>>(hypothesis: &str, references: &[S]) -> Result<f64, MetricsError> {
    if references.is_empty() {
        return Err(MetricsError::EmptyReferences);
    }
    let hyp = tokenize(hypothesis);
    if hyp.is_empty() {
        return Ok(0.0);
    }
    let refs: Vec<Vec<String>> = references.iter().map(|r| tokenize(r.as_ref())).collect();
    let c = hyp.len();
    let r = refs
        .iter()
        .map(|t| t.len())
        .min_by(|&a, &b| a.abs_diff(c).cmp(&b.abs_diff(c)).then(a.cmp(&b)))
        .unwrap();
    let bp = if c > r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    };

    let mut k = 0i32;
    let mut log_sum = 0.0;
    let mut included = 0usize;
    for n in 1..=4usize {
        if hyp.len() < n {
            break;
        }
        let h_n = hyp.len() - n + 1;
        let mut max_ref: HashMap<&[String], usize> = HashMap::new();
        for rt in &refs {
            if rt.len() < n {
                continue;
            }
            let mut counts: HashMap<&[String], usize> = HashMap::new();
            for w in rt.windows(n) {
                *counts.entry(w).or_insert(0) += 1;
            }
            for (gram, v) in counts {
                let slot = max_ref.entry(gram).or_insert(0);
                *slot = (*slot).max(v);
            }
        }
        let mut hyp_counts: HashMap<&[String], usize> = HashMap::new();
        for w in hyp.windows(n) {
            *hyp_counts.entry(w).or_insert(0) += 1;
        }
        let matched: usize = hyp_counts
            .iter()
            .map(|(gram, cnt)| cnt.min(max_ref.get(gram).unwrap_or(&0)))
            .sum();
        let p_n = if matched == 0 {
            k += 1;
            1.0 / (2f64.powi(k) * h_n as f64)
        } else {
            matched as f64 / h_n as f64
        };
        log_sum += p_n.ln();
        included += 1;
    }
    Ok(bp * (log_sum / included as f64).exp())
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            cur[j] = if a[i - 1] == b[j - 1] {
                prev[j - 1] + 1
            } else {
                prev[j].max(cur[j - 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
        cur[0] = 0;
    }
    prev[b.len()]
}

/// Longest-common-subsequence Rouge over the BLEU token stream.
///
/// Scores each reference by the harmonic mean of LCS precision and recall
/// and returns the best reference's score. An empty hypothesis scores 0.
pub fn rouge_l<S: AsRef<str>>(hypothesis: &str, references: &[S]) -> Result<f64, MetricsError> {
    if references.is_empty() {
        return Err(MetricsError::EmptyReferences);
    }
    let hyp = tokenize(hypothesis);
    if hyp.is_empty() {
        return Ok(0.0);
    }
    let mut best = 0.0f64;
    for reference in references {
        let rt = tokenize(reference.as_ref());
        let lcs = lcs_len(&hyp, &rt);
        let precision = ratio(lcs, hyp.len());
        let recall = ratio(lcs, rt.len());
        best = best.max(harmonic_mean(precision, recall));
    }
    Ok(best)
}

/// Means over a homogeneous sequence of per-record reports, accumulated
/// in input order.
pub fn aggregate_scores(per_record: &[RecordScore]) -> Result<MetricSummary, MetricsError> {
    let first = per_record.first().ok_or(MetricsError::EmptyInput)?;
    let homogeneous = per_record
        .iter()
        .all(|r| std::mem::discriminant(r) == std::mem::discriminant(first));
    if !homogeneous {
        return Err(MetricsError::MixedReportKinds);
    }
    let n = per_record.len();
    let mut summary = MetricSummary {
        records: n,
        mean_f1: None,
        zero_f1_records: None,
        mean_edit_total: None,
        mean_edit_per_triple: None,
        mean_bleu4: None,
        mean_rouge_l: None,
    };
    match first {
        RecordScore::F1(_) => {
            let mut sum = 0.0;
            let mut zeros = 0usize;
            for r in per_record {
                if let RecordScore::F1(b) = r {
                    sum += b.f1;
                    if b.f1 == 0.0 {
                        zeros += 1;
                    }
                }
            }
            summary.mean_f1 = Some(sum / n as f64);
            summary.zero_f1_records = Some(zeros);
        }
        RecordScore::Edit(_) => {
            let mut total_sum = 0.0;
            let mut per_triple_sum = 0.0;
            for r in per_record {
                if let RecordScore::Edit(e) = r {
                    total_sum += e.total as f64;
                    per_triple_sum += e.mean_per_record;
                }
            }
            summary.mean_edit_total = Some(total_sum / n as f64);
            summary.mean_edit_per_triple = Some(per_triple_sum / n as f64);
        }
        RecordScore::Gen(_) => {
            let mut bleu_sum = 0.0;
            let mut rouge_sum = 0.0;
            for r in per_record {
                if let RecordScore::Gen(g) = r {
                    bleu_sum += g.bleu4;
                    rouge_sum += g.rouge_l;
                }
            }
            summary.mean_bleu4 = Some(bleu_sum / n as f64);
            summary.mean_rouge_l = Some(rouge_sum / n as f64);
        }
    }
    Ok(summary)
}
