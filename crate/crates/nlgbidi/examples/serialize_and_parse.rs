//! The flat triple grammar: folding messy terms to canonical text,
//! rendering a set as one `s | r | o ;` line, and parsing it back.
//!
//! Run with `cargo run --example serialize_and_parse`.

use nlgbidi::linearize::{parse_triples, serialize_triples, strip_task_prefix, TaskKind};
use nlgbidi::model::{fold_text, Triple, TripleSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Terms arrive with underscores, stray case, and accents; construction
    // folds them to lowercase ASCII so equality is textual.
    let set = TripleSet::new(vec![
        Triple::new("Aarhus_Airport", "cityServed", "“Aarhus,  Denmark”")?,
        Triple::new("Aarhus_Airport", "runwayLength", "2702.0")?,
        Triple::new("Aarhus_Airport", "operatingOrganisation", "Aktieselskab")?,
    ]);
    for triple in set.iter() {
        println!("term-folded: {}", triple.canonical_key());
    }

    let flat = serialize_triples(&set)?;
    println!("\nserialized:\n  {flat}");

    // Training inputs carry a task tag; the parser strips it first.
    let tagged = format!("{} {flat}", TaskKind::S2d.prefix());
    println!("\ntagged for the text-to-data task:\n  {tagged}");
    let (task, body) = strip_task_prefix(&tagged);
    println!("stripped tag: {task:?}");

    // Parsing is lenient about the final terminator and extra spacing.
    let parsed = parse_triples(body)?;
    assert_eq!(parsed, set);
    println!("round trip: parsed {} triples, equal to the original", parsed.len());

    let sloppy = "aarhus airport | city served | aarhus denmark";
    let parsed = parse_triples(sloppy)?;
    println!(
        "\nlenient parse of {sloppy:?}:\n  {}",
        serialize_triples(&parsed)?
    );

    // The same folding applies to reference sentences.
    let folded = fold_text("The Ätna-Straße runs   south.");
    println!("\nsentence folding: {folded:?}");

    // Malformed input is an error, not a guess.
    let err = parse_triples("only two | parts ;").unwrap_err();
    println!("malformed segment rejected: {err}");
    Ok(())
}
