//! Canonical data model shared by every other module: terms, triples,
//! triple sets, and corpus records, plus the text normalization that makes
//! comparisons case- and whitespace-insensitive.
//!
//! Canonical text is pure printable ASCII, lowercase, underscore-free, with
//! single spaces between words. All comparisons elsewhere in the crate
//! (set F1, parsing, compression) happen on canonical forms; the raw forms
//! are kept verbatim for reporting and for pre-normalization statistics.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("term {raw:?} is empty after canonicalization")]
    EmptyTerm { raw: String },
    #[error("triple {index} has {arity} terms, expected 3")]
    WrongArity { index: usize, arity: usize },
    #[error("record {id} has no references")]
    NoReferences { id: u64 },
    #[error("record {id} has no triples")]
    NoTriples { id: u64 },
    #[error("term {raw:?} contains reserved character {ch:?}")]
    ReservedCharacter { raw: String, ch: char },
}

/// Folds arbitrary Unicode text to its canonical form.
///
/// The folding rules, applied in one pass:
/// - compatibility decomposition, then combining marks are dropped
///   (`"Ünïcode"` → `"unicode"`)
/// - underscores become spaces (`"Spanish_language"` → `"spanish language"`)
/// - whitespace runs collapse to a single space; leading/trailing
///   whitespace is trimmed
/// - everything is lowercased
/// - characters with no printable-ASCII mapping are dropped
///
/// Total function: empty input folds to the empty string. The result is a
/// fixed point, so folding is idempotent.
pub fn fold_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for ch in raw.nfkd() {
        if is_combining_mark(ch) {
            continue;
        }
        let ch = if ch == '_' { ' ' } else { ch };
        if ch.is_whitespace() {
            if !out.is_empty() {
                pending_space = true;
            }
            continue;
        }
        if !ch.is_ascii() {
            continue;
        }
        let ch = ch.to_ascii_lowercase();
        if !(' '..='~').contains(&ch) {
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.push(ch);
    }
    out
}

/// One term of a triple: the text as read from the corpus and its
/// canonical form.
#[derive(Debug, Clone)]
pub struct Term {
    raw: String,
    canonical: String,
}

impl Term {
    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical)
    }
}

/// Builds a [`Term`] from raw corpus text.
///
/// Errors with [`ModelError::EmptyTerm`] when nothing survives folding.
/// The flat serialization grammar has no escape mechanism, so terms whose
/// canonical form contains `|` or `;` are rejected outright.
pub fn canonicalize_term(raw: &str) -> Result<Term, ModelError> {
    let canonical = fold_text(raw);
    if canonical.is_empty() {
        return Err(ModelError::EmptyTerm {
            raw: raw.to_string(),
        });
    }
    if let Some(ch) = canonical.chars().find(|c| *c == '|' || *c == ';') {
        return Err(ModelError::ReservedCharacter {
            raw: raw.to_string(),
            ch,
        });
    }
    Ok(Term {
        raw: raw.to_string(),
        canonical,
    })
}

/// One subject/relation/object fact.
#[derive(Debug, Clone)]
pub struct Triple {
    subject: Term,
    relation: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: &str, relation: &str, object: &str) -> Result<Triple, ModelError> {
        Ok(Triple {
            subject: canonicalize_term(subject)?,
            relation: canonicalize_term(relation)?,
            object: canonicalize_term(object)?,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn relation(&self) -> &Term {
        &self.relation
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    /// Canonical `subject | relation | object` string; the unit of
    /// comparison for set metrics.
    pub fn canonical_key(&self) -> String {
        format!(
            "{} | {} | {}",
            self.subject.canonical, self.relation.canonical, self.object.canonical
        )
    }
}

/// Case- and whitespace-insensitive triple equality: canonical forms of all
/// three positionally corresponding terms must be equal.
pub fn triples_equal(a: &Triple, b: &Triple) -> bool {
    a.subject.canonical == b.subject.canonical
        && a.relation.canonical == b.relation.canonical
        && a.object.canonical == b.object.canonical
}

/// An ordered sequence of triples.
///
/// Order and duplicates are preserved (serialization is order-sensitive)
/// but equality is defined on the set of canonical triples, so two sets
/// that differ only in member order or duplication compare equal.
#[derive(Debug, Clone, Default)]
pub struct TripleSet {
    triples: Vec<Triple>,
}

impl TripleSet {
    pub fn new(triples: Vec<Triple>) -> TripleSet {
        TripleSet { triples }
    }

    /// Convenience constructor from raw `[subject, relation, object]` rows.
    pub fn from_rows(rows: &[[&str; 3]]) -> Result<TripleSet, ModelError> {
        let triples = rows
            .iter()
            .map(|[s, r, o]| Triple::new(s, r, o))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TripleSet { triples })
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Triple> {
        self.triples.iter()
    }

    /// The set of canonical triple keys, deduplicated.
    pub fn canonical_set(&self) -> BTreeSet<String> {
        self.triples.iter().map(Triple::canonical_key).collect()
    }
}

impl PartialEq for TripleSet {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_set() == other.canonical_set()
    }
}

impl Eq for TripleSet {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Split::Train => f.write_str("train"),
            Split::Validation => f.write_str("validation"),
            Split::Test => f.write_str("test"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "webnlg")]
    Webnlg,
    #[serde(rename = "wikibio-synthetic")]
    WikibioSynthetic,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Webnlg => f.write_str("webnlg"),
            Source::WikibioSynthetic => f.write_str("wikibio-synthetic"),
        }
    }
}

/// One corpus record: a triple set, its natural-language translations, and
/// the split it belongs to.
#[derive(Debug, Clone)]
pub struct Record {
    id: u64,
    triples: TripleSet,
    references: Vec<String>,
    split: Split,
    source: Source,
}

impl Record {
    pub fn new(
        id: u64,
        triples: TripleSet,
        references: Vec<String>,
        split: Split,
        source: Source,
    ) -> Result<Record, ModelError> {
        if references.is_empty() {
            return Err(ModelError::NoReferences { id });
        }
        if triples.is_empty() {
            return Err(ModelError::NoTriples { id });
        }
        Ok(Record {
            id,
            triples,
            references,
            split,
            source,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn triples(&self) -> &TripleSet {
        &self.triples
    }

    /// References exactly as read from the corpus (pre-normalization).
    pub fn references(&self) -> &[String] {
        &self.references
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn source(&self) -> Source {
        self.source
    }
}

/// Wire form of a [`Record`]: one JSON object per line in corpus files.
///
/// Triples are raw strings; canonical forms are computed on load by
/// [`RecordJson::into_record`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordJson {
    pub id: u64,
    pub triples: Vec<Vec<String>>,
    pub references: Vec<String>,
    pub split: Split,
    pub source: Source,
}

impl RecordJson {
    pub fn into_record(self) -> Result<Record, ModelError> {
        let mut triples = Vec::with_capacity(self.triples.len());
        for (index, row) in self.triples.iter().enumerate() {
            if row.len() != 3 {
                return Err(ModelError::WrongArity {
                    index,
                    arity: row.len(),
                });
            }
            triples.push(Triple::new(&row[0], &row[1], &row[2])?);
        }
        Record::new(
            self.id,
            TripleSet::new(triples),
            self.references,
            self.split,
            self.source,
        )
    }

    /// Wire form with raw text preserved.
    pub fn from_record(record: &Record) -> RecordJson {
        RecordJson {
            id: record.id,
            triples: record
                .triples
                .iter()
                .map(|t| {
                    vec![
                        t.subject.raw.clone(),
                        t.relation.raw.clone(),
                        t.object.raw.clone(),
                    ]
                })
                .collect(),
            references: record.references.clone(),
            split: record.split,
            source: record.source,
        }
    }

    /// Wire form with every field folded to canonical text, for `lint --fix`
    /// style cleaning.
    pub fn from_record_cleaned(record: &Record) -> RecordJson {
        RecordJson {
            id: record.id,
            triples: record
                .triples
                .iter()
                .map(|t| {
                    vec![
                        t.subject.canonical.clone(),
                        t.relation.canonical.clone(),
                        t.object.canonical.clone(),
                    ]
                })
                .collect(),
            references: record.references.iter().map(|r| fold_text(r)).collect(),
            split: record.split,
            source: record.source,
        }
    }
}
