//! Binding-based compression of flat triple lines: repeated long terms
//! become `let A = "...";` declarations, and decompression restores the
//! original set exactly.
//!
//! Run with `cargo run --example compress_roundtrip`.

use nlgbidi::compress::{compress, decompress, savings_report};
use nlgbidi::linearize::serialize_triples;
use nlgbidi::model::TripleSet;
use nlgbidi::pipeline::load_corpus;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let set = TripleSet::from_rows(&[
        ["Spirit_of_future_yet_to_come", "appears in", "A_Christmas_Carol"],
        ["Spirit_of_future_yet_to_come", "is a", "fictional_character"],
        ["Spirit_of_future_yet_to_come", "is a", "ghost"],
        ["Spirit_of_future_yet_to_come", "createdBy", "Charles_Dickens"],
        ["Spirit_of_future_yet_to_come", "appearsBefore", "Ebenezer_Scrooge"],
    ])?;

    let flat = serialize_triples(&set)?;
    println!("flat ({} chars):\n  {flat}\n", flat.chars().count());

    let doc = compress(&set, 2)?;
    println!("compressed ({} chars):\n{}\n", doc.char_len(), doc.to_text());

    let restored = decompress(&doc)?;
    assert_eq!(restored, set);
    println!("decompressed back to the same {} triples\n", restored.len());

    let savings = savings_report(&set)?;
    println!(
        "savings: {} -> {} chars ({:.1}% saved), {} -> {} tokens",
        savings.serialized_chars,
        savings.compressed_chars,
        savings.percent_saved,
        savings.serialized_tokens,
        savings.compressed_tokens,
    );

    // Across a whole corpus most records are too small to profit; the
    // scheme simply leaves those untouched.
    let corpus = load_corpus(
        &Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus.jsonl"),
        None,
    )?;
    let mut bound = 0usize;
    let mut saved_total = 0isize;
    for record in corpus.records() {
        let doc = compress(record.triples(), 2)?;
        if !doc.bindings.is_empty() {
            bound += 1;
            let report = savings_report(record.triples())?;
            saved_total += report.serialized_chars as isize - report.compressed_chars as isize;
        }
    }
    println!(
        "\ncorpus: {bound} of {} records profit from binding, {saved_total} chars saved in total",
        corpus.records().len()
    );
    Ok(())
}
