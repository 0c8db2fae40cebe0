//! Lossless binding compression of serialized triple sets.
//!
//! Long entity names that recur within a set are hoisted into binding
//! lines of the form `let A = "value";` and referenced as `$A` from the
//! body. A binding is only emitted when it strictly shrinks the document,
//! so the scheme never pessimizes. Decompression substitutes references
//! and reparses the body, recovering the original set exactly.

use crate::linearize::{parse_triples, serialize_triples, LinearizeError};
use crate::model::TripleSet;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompressError {
    #[error("cannot compress an empty triple set")]
    EmptyTripleSet,
    #[error("term {term:?} would be bound but contains a double quote, which the binding grammar cannot carry")]
    QuoteInValue { term: String },
    #[error("reference to unbound variable ${0}")]
    UnboundVariable(String),
    #[error("variable {0} is bound more than once")]
    DuplicateBinding(String),
    #[error("body does not parse: {0}")]
    BadBody(#[from] LinearizeError),
}

/// One `let VAR = "value";` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub var_name: String,
    pub value: String,
}

impl Binding {
    fn render(&self) -> String {
        format!("let {} = \"{}\";", self.var_name, self.value)
    }
}

/// A compressed document: bindings in emission order, then the body text
/// in the flat triple grammar with `$VAR` references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedDoc {
    pub bindings: Vec<Binding>,
    pub body: String,
}

impl CompressedDoc {
    /// Renders the document as text: one binding per line, body last.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.bindings {
            out.push_str(&b.render());
            out.push('\n');
        }
        out.push_str(&self.body);
        out
    }

    /// Reads a document back from text. Leading lines that match the
    /// binding grammar exactly become bindings; everything from the first
    /// non-binding line onward is the body.
    pub fn from_text(text: &str) -> CompressedDoc {
        let mut bindings = Vec::new();
        let mut body_lines = Vec::new();
        let mut in_body = false;
        for line in text.lines() {
            if !in_body {
                if let Some(b) = parse_binding_line(line) {
                    bindings.push(b);
                    continue;
                }
                in_body = true;
            }
            body_lines.push(line);
        }
        CompressedDoc {
            bindings,
            body: body_lines.join("\n"),
        }
    }

    /// Character length of the rendered document.
    pub fn char_len(&self) -> usize {
        self.to_text().chars().count()
    }
}

fn parse_binding_line(line: &str) -> Option<Binding> {
    let rest = line.trim().strip_prefix("let ")?;
    let (name, rest) = rest.split_once(" = \"")?;
    let value = rest.strip_suffix("\";")?;
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_uppercase()) {
        return None;
    }
    if value.is_empty() || value.contains('"') {
        return None;
    }
    Some(Binding {
        var_name: name.to_string(),
        value: value.to_string(),
    })
}

/// Variable name for the n-th binding (0-based): A..Z, AA, AB, ...
fn var_name(index: usize) -> String {
    let mut n = index + 1;
    let mut out = Vec::new();
    while n > 0 {
        n -= 1;
        out.push(b'A' + (n % 26) as u8);
        n /= 26;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

/// A binding pays for itself when the characters saved across `k` uses
/// exceed the cost of the binding line. For a term of length `len` bound
/// to a name of length `name_len`, each use shrinks by `len − name_len − 1`
/// and the binding line adds `len + name_len + 11`. With single-letter
/// names this is the rule k·(len−2) > len+12; longer names tighten it so
/// emitted bindings always save characters.
fn profitable(k: usize, len: usize, name_len: usize) -> bool {
    let gain = (len as i64 - name_len as i64 - 1) * k as i64;
    gain > len as i64 + name_len as i64 + 11
}

/// Compresses a triple set, binding each distinct term that occurs at
/// least `min_occurrences` times and whose binding shrinks the document.
/// Variables are assigned in first-occurrence order, reading each triple
/// subject, relation, object.
pub fn compress(ts: &TripleSet, min_occurrences: usize) -> Result<CompressedDoc, CompressError> {
    if ts.is_empty() {
        return Err(CompressError::EmptyTripleSet);
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    let mut order: Vec<&str> = Vec::new();
    for triple in ts.iter() {
        for term in [triple.subject(), triple.relation(), triple.object()] {
            let c = counts.entry(term.canonical()).or_insert(0);
            if *c == 0 {
                order.push(term.canonical());
            }
            *c += 1;
        }
    }

    let mut bindings = Vec::new();
    let mut by_term: HashMap<&str, String> = HashMap::new();
    for term in order {
        let k = counts[term];
        if k < min_occurrences.max(2) {
            continue;
        }
        let name = var_name(bindings.len());
        if !profitable(k, term.chars().count(), name.len()) {
            continue;
        }
        if term.contains('"') {
            return Err(CompressError::QuoteInValue {
                term: term.to_string(),
            });
        }
        by_term.insert(term, format!("${name}"));
        bindings.push(Binding {
            var_name: name,
            value: term.to_string(),
        });
    }

    let rendered: Vec<String> = ts
        .iter()
        .map(|t| {
            let part = |s: &str| by_term.get(s).cloned().unwrap_or_else(|| s.to_string());
            format!(
                "{} | {} | {} ;",
                part(t.subject().canonical()),
                part(t.relation().canonical()),
                part(t.object().canonical())
            )
        })
        .collect();
    Ok(CompressedDoc {
        bindings,
        body: rendered.join(" "),
    })
}

/// Expands every `$VAR` reference in the body and parses the result.
///
/// A reference is `$` followed by a maximal run of uppercase letters; a
/// `$` followed by anything else is literal text. Canonical body text is
/// lowercase, so references are unambiguous.
pub fn decompress(doc: &CompressedDoc) -> Result<TripleSet, CompressError> {
    let mut table: HashMap<&str, &str> = HashMap::new();
    for b in &doc.bindings {
        if table.insert(&b.var_name, &b.value).is_some() {
            return Err(CompressError::DuplicateBinding(b.var_name.clone()));
        }
    }
    let mut expanded = String::with_capacity(doc.body.len());
    let mut rest = doc.body.as_str();
    while let Some(pos) = rest.find('$') {
        expanded.push_str(&rest[..pos]);
        rest = &rest[pos + 1..];
        let name_len = rest.chars().take_while(|c| c.is_ascii_uppercase()).count();
        if name_len == 0 {
            expanded.push('$');
            continue;
        }
        let name = &rest[..name_len];
        match table.get(name) {
            Some(value) => expanded.push_str(value),
            None => return Err(CompressError::UnboundVariable(name.to_string())),
        }
        rest = &rest[name_len..];
    }
    expanded.push_str(rest);
    Ok(parse_triples(&expanded)?)
}

/// Size comparison between the flat and compressed renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct SavingsStats {
    pub serialized_chars: usize,
    pub compressed_chars: usize,
    pub serialized_tokens: usize,
    pub compressed_tokens: usize,
    pub percent_saved: f64,
}

/// Measures how much the binding scheme saves on one set. An empty set
/// reports zero everywhere.
pub fn savings_report(ts: &TripleSet) -> Result<SavingsStats, CompressError> {
    if ts.is_empty() {
        return Ok(SavingsStats {
            serialized_chars: 0,
            compressed_chars: 0,
            serialized_tokens: 0,
            compressed_tokens: 0,
            percent_saved: 0.0,
        });
    }
    let flat = serialize_triples(ts).map_err(CompressError::BadBody)?;
    let doc = compress(ts, 2)?;
    let text = doc.to_text();
    let serialized_chars = flat.chars().count();
    let compressed_chars = text.chars().count();
    let percent_saved = if serialized_chars == 0 {
        0.0
    } else {
        100.0 * (1.0 - compressed_chars as f64 / serialized_chars as f64)
    };
    Ok(SavingsStats {
        serialized_chars,
        compressed_chars,
        serialized_tokens: flat.split_whitespace().count(),
        compressed_tokens: text.split_whitespace().count(),
        percent_saved,
    })
}
