//! Degenerate-output detection and false-penalty classification.
//!
//! Two independent tools live here: a trailing-cycle repetition detector
//! for generation loops that run until a length cap ("... Bucuresti
//! Bucuresti Bucuresti Bucu"), and a classifier that sorts unmatched
//! predicted triples into a small taxonomy of near-misses (swapped
//! arguments, numeric formatting, unit reformulation, relation near-miss)
//! so that exact-match F1 penalties can be audited.

use crate::metrics::levenshtein;
use crate::model::{Triple, TripleSet};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagnosticsError {
    #[error("no tokens to scan")]
    EmptyInput,
}

/// Thresholds for the repetition scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionConfig {
    #[serde(default = "default_min_period")]
    pub min_period: usize,
    #[serde(default = "default_max_period")]
    pub max_period: usize,
    #[serde(default = "default_min_repeats")]
    pub min_repeats: usize,
}

fn default_min_period() -> usize {
    1
}
fn default_max_period() -> usize {
    10
}
fn default_min_repeats() -> usize {
    3
}

impl Default for RepetitionConfig {
    fn default() -> Self {
        RepetitionConfig {
            min_period: 1,
            max_period: 10,
            min_repeats: 3,
        }
    }
}

/// Result of scanning one token sequence for a trailing cycle.
///
/// `start_index` is the first token of the earliest full copy of the
/// cycle; a truncated partial copy may follow the full copies at the very
/// end. `hit_length_cap` is never set by the detector itself — the caller
/// flips it when the output length equals the generation cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionFlag {
    pub flagged: bool,
    pub period: usize,
    pub repeats: usize,
    pub start_index: usize,
    pub hit_length_cap: bool,
}

/// Counts consecutive copies of the cycle `tokens[end-p..end]` ending at
/// `end`, walking backwards block by block.
fn count_copies<S: AsRef<str>>(tokens: &[S], end: usize, p: usize) -> usize {
    if p == 0 || end < p {
        return 0;
    }
    let cycle = &tokens[end - p..end];
    let mut r = 1;
    while end >= (r + 1) * p {
        let start = end - (r + 1) * p;
        let block = &tokens[start..start + p];
        if block
            .iter()
            .zip(cycle)
            .all(|(a, b)| a.as_ref() == b.as_ref())
        {
            r += 1;
        } else {
            break;
        }
    }
    r
}

/// Trailing repeat count for period `p`, tolerating one truncated final
/// token (a proper character-prefix of the token one cycle earlier), the
/// way a length cap chops generations mid-word.
fn trailing_repeats<S: AsRef<str>>(tokens: &[S], p: usize) -> (usize, bool) {
    let n = tokens.len();
    let exact = count_copies(tokens, n, p);
    let mut truncated = 0;
    if n > p {
        let last = tokens[n - 1].as_ref();
        let counterpart = tokens[n - 1 - p].as_ref();
        if !last.is_empty() && last.len() < counterpart.len() && counterpart.starts_with(last) {
            truncated = count_copies(tokens, n - 1, p);
        }
    }
    if truncated > exact {
        (truncated, true)
    } else {
        (exact, false)
    }
}

/// Scans the tail of a token sequence for the smallest period whose
/// trailing repeat count is maximal, and flags when that count reaches
/// `min_repeats`.
pub fn detect_repetition<S: AsRef<str>>(
    tokens: &[S],
    config: &RepetitionConfig,
) -> Result<RepetitionFlag, DiagnosticsError> {
    let n = tokens.len();
    if n == 0 {
        return Err(DiagnosticsError::EmptyInput);
    }
    let lo = config.min_period.max(1);
    let hi = config.max_period.min(n);
    let mut best: Option<(usize, usize, bool)> = None;
    for p in lo..=hi {
        let (r, trunc) = trailing_repeats(tokens, p);
        if best.is_none_or(|(_, best_r, _)| r > best_r) {
            best = Some((p, r, trunc));
        }
    }
    Ok(match best {
        None => RepetitionFlag {
            flagged: false,
            period: n,
            repeats: 1,
            start_index: 0,
            hit_length_cap: false,
        },
        Some((period, repeats, trunc)) => {
            let tail = repeats * period + usize::from(trunc);
            RepetitionFlag {
                flagged: repeats >= config.min_repeats,
                period,
                repeats,
                start_index: n - tail,
                hit_length_cap: false,
            }
        }
    })
}

/// The false-penalty taxonomy for unmatched predicted triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchKind {
    SwappedArguments,
    NumericFormat,
    UnitReformulation,
    RelationNearMiss,
    Unmatched,
}

impl std::fmt::Display for MismatchKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MismatchKind::SwappedArguments => "swapped_arguments",
            MismatchKind::NumericFormat => "numeric_format",
            MismatchKind::UnitReformulation => "unit_reformulation",
            MismatchKind::RelationNearMiss => "relation_near_miss",
            MismatchKind::Unmatched => "unmatched",
        })
    }
}

/// One classified unmatched prediction, with the gold triple that
/// justified the label when one exists.
#[derive(Debug, Clone)]
pub struct DiagnosticLabel {
    pub kind: MismatchKind,
    pub pred: Triple,
    pub gold: Option<Triple>,
}

/// Maps unit synonyms to canonical unit names, case-insensitively.
#[derive(Debug, Clone)]
pub struct UnitTable {
    synonyms: HashMap<String, String>,
}

impl UnitTable {
    /// The built-in table: roughly twenty everyday measurement units.
    pub fn built_in() -> Self {
        let mut table = UnitTable {
            synonyms: HashMap::new(),
        };
        let entries: &[(&str, &[&str])] = &[
            ("gram", &["g", "grams"]),
            ("kilogram", &["kg", "kilograms"]),
            ("milligram", &["mg", "milligrams"]),
            ("tonne", &["t", "tonnes", "ton", "tons"]),
            ("metre", &["m", "meter", "metres", "meters"]),
            ("centimetre", &["cm", "centimeter", "centimetres", "centimeters"]),
            ("millimetre", &["mm", "millimeter", "millimetres", "millimeters"]),
            ("kilometre", &["km", "kilometer", "kilometres", "kilometers"]),
            ("foot", &["ft", "feet"]),
            ("inch", &["in", "inches"]),
            ("yard", &["yd", "yards"]),
            ("mile", &["mi", "miles"]),
            ("second", &["s", "sec", "seconds"]),
            ("minute", &["min", "minutes"]),
            ("hour", &["h", "hr", "hours"]),
            ("litre", &["l", "liter", "litres", "liters"]),
            ("millilitre", &["ml", "milliliter", "millilitres", "milliliters"]),
            ("pound", &["lb", "lbs", "pounds"]),
            ("ounce", &["oz", "ounces"]),
        ];
        for (canonical, names) in entries {
            table.add(canonical, names);
        }
        table
    }

    /// Registers a canonical unit and its synonyms (all lowercased).
    pub fn add(&mut self, canonical: &str, synonyms: &[&str]) {
        let canon = canonical.to_lowercase();
        self.synonyms.insert(canon.clone(), canon.clone());
        for s in synonyms {
            self.synonyms.insert(s.to_lowercase(), canon.clone());
        }
    }

    /// Canonical name for a unit word, if the table knows it.
    pub fn canonical(&self, word: &str) -> Option<&str> {
        self.synonyms.get(&word.to_lowercase()).map(String::as_str)
    }
}

impl Default for UnitTable {
    fn default() -> Self {
        UnitTable::built_in()
    }
}

/// An exact decimal value in normal form (no trailing fractional zeros),
/// so `896`, `896.0`, and `896.00` compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NumericValue {
    mantissa: i128,
    scale: u32,
}

impl NumericValue {
    fn new(mut mantissa: i128, mut scale: u32) -> Self {
        while scale > 0 && mantissa % 10 == 0 {
            mantissa /= 10;
            scale -= 1;
        }
        NumericValue { mantissa, scale }
    }
}

impl std::fmt::Display for NumericValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.mantissa);
        }
        let sign = if self.mantissa < 0 { "-" } else { "" };
        let digits = self.mantissa.unsigned_abs().to_string();
        let s = self.scale as usize;
        if digits.len() <= s {
            write!(f, "{sign}0.{}{}", "0".repeat(s - digits.len()), digits)
        } else {
            let (int, frac) = digits.split_at(digits.len() - s);
            write!(f, "{sign}{int}.{frac}")
        }
    }
}

/// Reads a decimal literal with an optional trailing unit word.
///
/// The numeric part is `-?digits[.digits]`; the unit may be attached
/// ("30.0g") or separated by spaces ("30 grams") but must be a single
/// alphabetic word. Unknown unit words canonicalize to their lowercase
/// selves so identical spellings still compare equal. Anything else —
/// multiple words, stray characters, more than 30 digits — yields `None`.
pub fn parse_number_with_unit_in(
    term: &str,
    units: &UnitTable,
) -> Option<(NumericValue, Option<String>)> {
    let text = term.trim().to_lowercase();
    let mut chars = text.char_indices().peekable();
    let mut negative = false;
    if let Some((_, '-')) = chars.peek() {
        negative = true;
        chars.next();
    }
    let mut int_digits = String::new();
    let mut frac_digits = String::new();
    let mut in_fraction = false;
    let mut rest_start = text.len();
    for (i, ch) in chars {
        match ch {
            '0'..='9' if !in_fraction => int_digits.push(ch),
            '0'..='9' => frac_digits.push(ch),
            '.' if !in_fraction && !int_digits.is_empty() => in_fraction = true,
            _ => {
                rest_start = i;
                break;
            }
        }
    }
    if int_digits.is_empty() || (in_fraction && frac_digits.is_empty()) {
        return None;
    }
    if int_digits.len() + frac_digits.len() > 30 {
        return None;
    }
    let mut mantissa: i128 = 0;
    for d in int_digits.chars().chain(frac_digits.chars()) {
        mantissa = mantissa * 10 + i128::from(d as u8 - b'0');
    }
    if negative {
        mantissa = -mantissa;
    }
    let value = NumericValue::new(mantissa, frac_digits.len() as u32);

    let rest = text[rest_start..].trim();
    if rest.is_empty() {
        return Some((value, None));
    }
    if !rest.chars().all(|c| c.is_ascii_alphabetic()) {
        return None;
    }
    let unit = units
        .canonical(rest)
        .map(str::to_string)
        .unwrap_or_else(|| rest.to_string());
    Some((value, Some(unit)))
}

/// [`parse_number_with_unit_in`] with the built-in unit table.
pub fn parse_number_with_unit(term: &str) -> Option<(NumericValue, Option<String>)> {
    parse_number_with_unit_in(term, &UnitTable::built_in())
}

fn token_set(term: &str) -> BTreeSet<&str> {
    term.split_whitespace().collect()
}

fn classify_pair(pred: &Triple, gold: &Triple, units: &UnitTable) -> Option<MismatchKind> {
    let (ps, pr, po) = (
        pred.subject().canonical(),
        pred.relation().canonical(),
        pred.object().canonical(),
    );
    let (gs, gr, go) = (
        gold.subject().canonical(),
        gold.relation().canonical(),
        gold.object().canonical(),
    );
    if ps == go && po == gs && pr == gr {
        return Some(MismatchKind::SwappedArguments);
    }
    if ps == gs && pr == gr {
        if let (Some((pv, pu)), Some((gv, gu))) = (
            parse_number_with_unit_in(po, units),
            parse_number_with_unit_in(go, units),
        ) {
            if pv == gv {
                match (pu, gu) {
                    (None, None) => return Some(MismatchKind::NumericFormat),
                    (Some(a), Some(b)) if a == b => {
                        return Some(MismatchKind::UnitReformulation)
                    }
                    _ => {}
                }
            }
        }
    }
    if ps == gs && po == go && pr != gr {
        let pt = token_set(pr);
        let gt = token_set(gr);
        let subset = pt.is_subset(&gt) || gt.is_subset(&pt);
        if subset || levenshtein(pr, gr) <= 4 {
            return Some(MismatchKind::RelationNearMiss);
        }
    }
    None
}

/// Labels every predicted triple that has no exact match in the gold set.
///
/// Exact matches are removed first with multiset semantics. Each leftover
/// prediction gets the highest-priority label any gold triple supports,
/// in the order swapped_arguments, numeric_format, unit_reformulation,
/// relation_near_miss; predictions no rule explains come back as
/// `unmatched` with no gold triple attached.
pub fn classify_mismatches_in(
    pred: &TripleSet,
    gold: &TripleSet,
    units: &UnitTable,
) -> Vec<DiagnosticLabel> {
    let mut gold_remaining: HashMap<String, usize> = HashMap::new();
    for g in gold.iter() {
        *gold_remaining.entry(g.canonical_key()).or_insert(0) += 1;
    }
    let mut unmatched_preds = Vec::new();
    for p in pred.iter() {
        match gold_remaining.get_mut(&p.canonical_key()) {
            Some(count) if *count > 0 => *count -= 1,
            _ => unmatched_preds.push(p),
        }
    }

    const PRIORITY: [MismatchKind; 4] = [
        MismatchKind::SwappedArguments,
        MismatchKind::NumericFormat,
        MismatchKind::UnitReformulation,
        MismatchKind::RelationNearMiss,
    ];
    unmatched_preds
        .into_iter()
        .map(|p| {
            for wanted in PRIORITY {
                for g in gold.iter() {
                    if classify_pair(p, g, units) == Some(wanted) {
                        return DiagnosticLabel {
                            kind: wanted,
                            pred: p.clone(),
                            gold: Some(g.clone()),
                        };
                    }
                }
            }
            DiagnosticLabel {
                kind: MismatchKind::Unmatched,
                pred: p.clone(),
                gold: None,
            }
        })
        .collect()
}

/// [`classify_mismatches_in`] with the built-in unit table.
pub fn classify_mismatches(pred: &TripleSet, gold: &TripleSet) -> Vec<DiagnosticLabel> {
    classify_mismatches_in(pred, gold, &UnitTable::built_in())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(text: &str) -> Vec<&str> {
        text.split_whitespace().collect()
    }

    fn detect(text: &str) -> RepetitionFlag {
        detect_repetition(&toks(text), &RepetitionConfig::default()).unwrap()
    }

    const BUCURESTI_ROW: &str = "The 1 Decembrie 1918 University is located in \
        Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti \
        Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti \
        Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucu";

    #[test]
    fn flags_the_glitch_token_row() {
        let flag = detect(BUCURESTI_ROW);
        assert!(flag.flagged);
        assert_eq!(flag.period, 1);
        assert_eq!(flag.repeats, 19);
        assert!(flag.repeats >= 9);
        assert_eq!(flag.start_index, 8);
    }

    #[test]
    fn normal_sentences_pass() {
        for text in [
            "austin is part of hays county texas .",
            "Arlington is part of Tarrant County,Texas.",
            "The ground of AFC Blackpool is located in Blackpool which is led by Gordon Marsden.",
            "Augustus Pugin was born in Bloomsbury, Ireland. He was the architect of Adare Manor, of Westminster,",
        ] {
            assert!(!detect(text).flagged, "false flag on {text:?}");
        }
    }

    #[test]
    fn two_token_cycle_is_found() {
        let flag = detect("a b a b a b");
        assert!(flag.flagged);
        assert_eq!(flag.period, 2);
        assert_eq!(flag.repeats, 3);
        assert_eq!(flag.start_index, 0);
    }

    #[test]
    fn two_repeats_are_below_threshold() {
        let flag = detect("x a b a b");
        assert!(!flag.flagged);
        assert_eq!((flag.period, flag.repeats), (2, 2));
    }

    #[test]
    fn single_token_runs_are_anchored_at_the_tail() {
        let flag = detect("x a a a");
        assert!(flag.flagged);
        assert_eq!((flag.period, flag.repeats, flag.start_index), (1, 3, 1));
    }

    #[test]
    fn truncated_final_token_counts_toward_the_cycle() {
        let flag = detect("go stop go stop go stop go st");
        assert!(flag.flagged);
        assert_eq!(flag.period, 2);
        assert_eq!(flag.repeats, 3);
        // "go" opens a fourth copy and "st" is a prefix of "stop".
        assert_eq!(flag.start_index, 1);
    }

    #[test]
    fn thresholds_come_from_the_config() {
        let strict = RepetitionConfig {
            min_repeats: 5,
            ..RepetitionConfig::default()
        };
        let flag = detect_repetition(&toks("a a a a"), &strict).unwrap();
        assert!(!flag.flagged);
        assert_eq!(flag.repeats, 4);
    }

    #[test]
    fn empty_token_list_is_an_error() {
        let none: [&str; 0] = [];
        assert_eq!(
            detect_repetition(&none, &RepetitionConfig::default()).unwrap_err(),
            DiagnosticsError::EmptyInput
        );
    }

    #[test]
    fn min_period_beyond_length_falls_back() {
        let cfg = RepetitionConfig {
            min_period: 5,
            ..RepetitionConfig::default()
        };
        let flag = detect_repetition(&toks("a b"), &cfg).unwrap();
        assert!(!flag.flagged);
        assert_eq!((flag.period, flag.repeats), (2, 1));
    }

    fn oracle_best(tokens: &[&str], cfg: &RepetitionConfig) -> (usize, usize) {
        let n = tokens.len();
        let mut best = (0usize, 0usize);
        for p in cfg.min_period.max(1)..=cfg.max_period.min(n) {
            let copies_ending_at = |end: usize| -> usize {
                let cycle = &tokens[end - p..end];
                let mut r = 0;
                for cand in 1..=end / p {
                    if tokens[end - cand * p..end].chunks(p).all(|c| c == cycle) {
                        r = cand;
                    } else {
                        break;
                    }
                }
                r
            };
            let mut r = copies_ending_at(n);
            if n > p {
                let last = tokens[n - 1];
                let cp = tokens[n - 1 - p];
                if !last.is_empty() && last.len() < cp.len() && cp.starts_with(last) {
                    r = r.max(copies_ending_at(n - 1));
                }
            }
            if r > best.1 {
                best = (p, r);
            }
        }
        best
    }

    proptest! {
        #[test]
        fn detector_agrees_with_chunked_oracle(
            tokens in proptest::collection::vec(
                proptest::sample::select(vec!["a", "b", "ab", "abc"]),
                1..40),
        ) {
            let cfg = RepetitionConfig::default();
            let flag = detect_repetition(&tokens, &cfg).unwrap();
            let (op, or) = oracle_best(&tokens, &cfg);
            prop_assert_eq!(flag.period, op);
            prop_assert_eq!(flag.repeats, or);
            prop_assert_eq!(flag.flagged, or >= cfg.min_repeats);
        }
    }

    fn set(rows: &[[&str; 3]]) -> TripleSet {
        TripleSet::from_rows(rows).unwrap()
    }

    #[test]
    fn swapped_arguments_are_recognized() {
        let pred = set(&[[
            "Christian Burns",
            "associated band/associated musical artist",
            "Andrew Rayel",
        ]]);
        let gold = set(&[[
            "Andrew Rayel",
            "associated band/associated musical artist",
            "Christian Burns",
        ]]);
        let labels = classify_mismatches(&pred, &gold);
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].kind, MismatchKind::SwappedArguments);
        assert!(labels[0].gold.is_some());
    }

    #[test]
    fn near_synonym_relation_is_a_near_miss() {
        let pred = set(&[["California", "stone", "Benitoite"]]);
        let gold = set(&[["California", "gemstone", "Benitoite"]]);
        let labels = classify_mismatches(&pred, &gold);
        assert_eq!(labels[0].kind, MismatchKind::RelationNearMiss);
    }

    #[test]
    fn reshaped_object_stays_unmatched() {
        let pred = set(&[["Al Kharaitiyat SC", "league", "Qatar Stars"]]);
        let gold = set(&[["Al Kharaitiyat SC", "position", "Qatar Stars League"]]);
        let labels = classify_mismatches(&pred, &gold);
        assert_eq!(labels[0].kind, MismatchKind::Unmatched);
        assert!(labels[0].gold.is_none());
    }

    #[test]
    fn integer_versus_decimal_point_zero() {
        let pred = set(&[["Andrews County Airport", "runway length", "896"]]);
        let gold = set(&[["Andrews County Airport", "runway length", "896.0"]]);
        let labels = classify_mismatches(&pred, &gold);
        assert_eq!(labels[0].kind, MismatchKind::NumericFormat);
    }

    #[test]
    fn leader_name_versus_leader() {
        let pred = set(&[
            ["Atlanta", "leader name", "Kasim Reed"],
            ["United States", "leader name", "Barack Obama"],
        ]);
        let gold = set(&[
            ["Atlanta", "leader", "Kasim Reed"],
            ["United States", "leader", "Barack Obama"],
        ]);
        let labels = classify_mismatches(&pred, &gold);
        assert_eq!(labels.len(), 2);
        assert!(labels
            .iter()
            .all(|l| l.kind == MismatchKind::RelationNearMiss));
    }

    #[test]
    fn gram_abbreviation_is_a_unit_reformulation() {
        let pred = set(&[["Barny cakes", "serving size", "30.0 g"]]);
        let gold = set(&[["Barny cakes", "serving size", "30 grams"]]);
        let labels = classify_mismatches(&pred, &gold);
        assert_eq!(labels[0].kind, MismatchKind::UnitReformulation);
    }

    #[test]
    fn exact_matches_produce_no_labels() {
        let ts = set(&[["a", "b", "c"], ["d", "e", "f"]]);
        assert!(classify_mismatches(&ts, &ts).is_empty());
    }

    #[test]
    fn swap_takes_priority_over_near_miss() {
        let pred = set(&[["x", "rel", "y"]]);
        let gold = set(&[["y", "rel", "x"], ["x", "rel name", "y"]]);
        let labels = classify_mismatches(&pred, &gold);
        assert_eq!(labels[0].kind, MismatchKind::SwappedArguments);
    }

    #[test]
    fn every_unmatched_prediction_gets_exactly_one_label() {
        let pred = set(&[["a", "b", "c"], ["p", "q", "r"], ["x", "y", "z"]]);
        let gold = set(&[["a", "b", "c"], ["c", "b", "a"]]);
        let labels = classify_mismatches(&pred, &gold);
        assert_eq!(labels.len(), 2);
    }

    #[test]
    fn unit_mismatch_is_not_a_reformulation() {
        let pred = set(&[["s", "r", "30 g"]]);
        let gold = set(&[["s", "r", "30 kg"]]);
        let labels = classify_mismatches(&pred, &gold);
        assert_eq!(labels[0].kind, MismatchKind::Unmatched);
    }

    #[test]
    fn parses_value_and_unit() {
        let (v, u) = parse_number_with_unit("30.0 g").unwrap();
        assert_eq!(u.as_deref(), Some("gram"));
        assert_eq!(v, parse_number_with_unit("30 grams").unwrap().0);
        assert_eq!(v.to_string(), "30");
    }

    #[test]
    fn attached_unit_is_split_off() {
        let (v, u) = parse_number_with_unit("30.0g").unwrap();
        assert_eq!(u.as_deref(), Some("gram"));
        assert_eq!(v, parse_number_with_unit("30 g").unwrap().0);
    }

    #[test]
    fn bare_number_has_no_unit() {
        let (v, u) = parse_number_with_unit("896.0").unwrap();
        assert_eq!(u, None);
        assert_eq!(v, parse_number_with_unit("896").unwrap().0);
        assert_eq!(v.to_string(), "896");
    }

    #[test]
    fn words_are_not_numbers() {
        assert_eq!(parse_number_with_unit("hello"), None);
        assert_eq!(parse_number_with_unit(""), None);
        assert_eq!(parse_number_with_unit("12 feet long"), None);
        assert_eq!(parse_number_with_unit("1,000"), None);
        assert_eq!(parse_number_with_unit("1."), None);
        assert_eq!(parse_number_with_unit(".5"), None);
    }

    #[test]
    fn negative_and_zero_values_normalize() {
        assert_eq!(
            parse_number_with_unit("-5").unwrap().0,
            parse_number_with_unit("-5.0").unwrap().0
        );
        assert_eq!(
            parse_number_with_unit("0").unwrap().0,
            parse_number_with_unit("0.00").unwrap().0
        );
        assert_eq!(parse_number_with_unit("0.25").unwrap().0.to_string(), "0.25");
        assert_eq!(parse_number_with_unit("-0.5").unwrap().0.to_string(), "-0.5");
    }

    #[test]
    fn unknown_units_match_themselves() {
        let (v1, u1) = parse_number_with_unit("3 florps").unwrap();
        let (v2, u2) = parse_number_with_unit("3.0 FLORPS").unwrap();
        assert_eq!(v1, v2);
        assert_eq!(u1, u2);
    }

    #[test]
    fn custom_units_extend_the_table() {
        let mut table = UnitTable::built_in();
        table.add("furlong", &["fur", "furlongs"]);
        let (_, u) = parse_number_with_unit_in("8 fur", &table).unwrap();
        assert_eq!(u.as_deref(), Some("furlong"));
    }

    proptest! {
        #[test]
        fn number_parsing_ignores_case(word in "[0-9]{1,5}(\\.[0-9]{1,3})?( [a-z]{1,8})?") {
            prop_assert_eq!(
                parse_number_with_unit(&word),
                parse_number_with_unit(&word.to_uppercase())
            );
        }

        #[test]
        fn labels_are_one_per_unmatched_prediction(
            pred_rows in proptest::collection::vec(("[ab]", "[rq]", "[xy]"), 0..5),
            gold_rows in proptest::collection::vec(("[ab]", "[rq]", "[xy]"), 1..5),
        ) {
            let mk = |rows: &[(String, String, String)]| {
                TripleSet::new(
                    rows.iter()
                        .map(|(s, r, o)| Triple::new(s, r, o).unwrap())
                        .collect(),
                )
            };
            let pred = mk(&pred_rows);
            let gold = mk(&gold_rows);
            let labels = classify_mismatches(&pred, &gold);
            let mut gold_counts: HashMap<String, usize> = HashMap::new();
            for g in gold.iter() {
                *gold_counts.entry(g.canonical_key()).or_insert(0) += 1;
            }
            let mut expected_unmatched = 0;
            for p in pred.iter() {
                match gold_counts.get_mut(&p.canonical_key()) {
                    Some(c) if *c > 0 => *c -= 1,
                    _ => expected_unmatched += 1,
                }
            }
            prop_assert_eq!(labels.len(), expected_unmatched);
        }
    }
}
