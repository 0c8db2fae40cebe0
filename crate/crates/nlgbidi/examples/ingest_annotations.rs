//! Turning model-annotated sentences into corpus records: each envelope
//! carries a sentence and a proposed flat-triple annotation, and
//! validation decides which become training records.
//!
//! Run with `cargo run --example ingest_annotations`.

use nlgbidi::pipeline::{ingest_synthetic, validate_synthetic, SyntheticEnvelope};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/synthetic.jsonl");
    let envelopes: Vec<SyntheticEnvelope> = BufReader::new(File::open(&path)?)
        .lines()
        .map(|line| Ok(serde_json::from_str(&line?)?))
        .collect::<Result<_, Box<dyn std::error::Error>>>()?;

    let (records, report) = ingest_synthetic(&envelopes, 5000);
    println!(
        "requested {} -> accepted {} (content-filtered {}, malformed {})\n",
        report.requested, report.accepted, report.content_filtered, report.malformed
    );

    for record in &records {
        println!(
            "#{} [{}] {} triple(s): {}",
            record.id(),
            record.source(),
            record.triples().len(),
            record.references()[0],
        );
    }

    // Ids follow envelope positions, so rejected envelopes leave gaps and
    // every accepted record can be traced back to its source line.
    println!("\nper-envelope outcomes:");
    for (i, envelope) in envelopes.iter().enumerate() {
        match validate_synthetic(envelope, 5000 + i as u64) {
            Ok(record) => println!("  line {}: accepted as #{}", i + 1, record.id()),
            Err(reason) => println!("  line {}: rejected ({reason:?})", i + 1),
        }
    }
    Ok(())
}
