//! Corpus engineering and evaluation for bidirectional data-to-text corpora.
//!
//! A record in such a corpus pairs one set of RDF triples with one or more
//! natural-language translations of it. The toolkit covers the full loop
//! around training and evaluating sequence-to-sequence models on the two
//! directions of that pairing, without doing any model work itself:
//!
//! - [`model`] — canonical triple/record data model and text normalization
//! - [`linearize`] — flat `s | r | o ;` serialization, parsing of model
//!   output back into triple sets, and task-tagged training pairs
//! - [`compress`] — entity-name binding (`let A = "...";`) that shortens
//!   triple documents losslessly
//! - [`metrics`] — open-vocabulary set F1, aligned edit distance, BLEU-4
//!   and Rouge-L over multiple references
//! - [`diagnostics`] — repetition-loop detection and classification of
//!   false metric penalties (swapped arguments, numeric formats, units)
//! - [`pipeline`] — corpus loading, ABAB multi-task interleaving, seeded
//!   synthetic-record injection, and LLM annotation validation
//! - [`stats`] — descriptive corpus statistics (lengths, relation
//!   frequencies, record shapes)
//!
//! Every operation is exposed both as a library call and through the
//! `nlgbidi` binary; the `examples/` directory has one runnable program per
//! capability, which is the recommended starting point:
//!
//! ```bash
//! cargo run --example serialize_and_parse
//! cargo run --example compress_roundtrip
//! cargo run --example score_predictions
//! cargo run --example diagnose_outputs
//! cargo run --example build_training_stream
//! cargo run --example ingest_annotations
//! cargo run --example corpus_statistics
//! ```
//!
//! All types are immutable values after construction and all operations are
//! pure functions, so everything here can be shared across threads freely;
//! the CLI uses that for `--jobs` parallel scoring.

pub mod cli;
pub mod compress;
pub mod config;
pub mod diagnostics;
pub mod linearize;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod stats;

pub use model::{Record, Source, Split, Term, Triple, TripleSet};
