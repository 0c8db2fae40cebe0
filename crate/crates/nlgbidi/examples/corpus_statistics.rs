//! Descriptive statistics over a corpus: split verification, length
//! distributions for both sides of the task, record shape, and the
//! relation inventory.
//!
//! Run with `cargo run --example corpus_statistics`.

use nlgbidi::pipeline::load_corpus;
use nlgbidi::stats::{
    length_stats, record_shape_stats, relation_frequency, LengthField, LengthStats,
};
use std::path::Path;

fn print_row(name: &str, s: &LengthStats) {
    println!(
        "{name:<16} {:>8.2} {:>8.2} {:>6.0} {:>6.2} {:>6.2} {:>6.2} {:>6.0}",
        s.mean, s.std, s.min, s.p25, s.p50, s.p75, s.max
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Passing expected counts turns split drift into a load error.
    let corpus = load_corpus(
        &Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus.jsonl"),
        Some((40, 5, 5)),
    )?;
    let (train, validation, test) = corpus.split_counts();
    println!(
        "{} records ({train} train / {validation} validation / {test} test)\n",
        corpus.records().len()
    );

    println!(
        "{:<16} {:>8} {:>8} {:>6} {:>6} {:>6} {:>6} {:>6}",
        "characters", "mean", "std", "min", "p25", "p50", "p75", "max"
    );
    print_row(
        "reference_text",
        &length_stats(&corpus, LengthField::ReferenceText)?,
    );
    print_row(
        "serialized_rdf",
        &length_stats(&corpus, LengthField::SerializedRdf)?,
    );

    let shape = record_shape_stats(&corpus)?;
    println!(
        "\nper record: {:.2} references, {:.2} +/- {:.2} triples",
        shape.refs_per_record_mean, shape.triples_per_set_mean, shape.triples_per_set_std
    );

    let relations = relation_frequency(&corpus)?;
    println!("\n{} distinct relations; most frequent:", relations.len());
    for entry in relations.iter().take(8) {
        println!("  {:>3}  {}", entry.count, entry.relation);
    }
    Ok(())
}
