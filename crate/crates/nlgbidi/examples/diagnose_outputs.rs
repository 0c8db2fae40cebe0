//! Error analysis beyond scores: classifying why predicted triples missed
//! the gold set, and catching degenerate repetition loops in generated
//! sentences.
//!
//! Run with `cargo run --example diagnose_outputs`.

use nlgbidi::diagnostics::{
    classify_mismatches, detect_repetition, RepetitionConfig,
};
use nlgbidi::model::TripleSet;

type TripleRow = [[&'static str; 3]; 1];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Each pair below reproduces a failure mode seen in decoded outputs.
    let pairs: &[(&str, TripleRow, TripleRow)] = &[
        (
            "arguments swapped",
            [["Andrew Rayel", "associated band", "Christian Burns"]],
            [["Christian Burns", "associated band", "Andrew Rayel"]],
        ),
        (
            "numeric format drift",
            [["Andrews County Airport", "runway length", "896"]],
            [["Andrews County Airport", "runway length", "896.0"]],
        ),
        (
            "unit reformulated",
            [["Barny cakes", "serving size", "30.0 g"]],
            [["Barny cakes", "serving size", "30 grams"]],
        ),
        (
            "relation near-miss",
            [["Atlanta", "leader", "Kasim Reed"]],
            [["Atlanta", "leader name", "Kasim Reed"]],
        ),
        (
            "plain miss",
            [["Al Kharaitiyat SC", "league", "Qatar Stars"]],
            [["Al Kharaitiyat SC", "position", "Qatar Stars League"]],
        ),
    ];
    for (name, pred, gold) in pairs {
        let pred = TripleSet::from_rows(pred)?;
        let gold = TripleSet::from_rows(gold)?;
        for label in classify_mismatches(&pred, &gold) {
            println!(
                "{name:20} -> {}  pred: {}  gold: {}",
                label.kind,
                label.pred.canonical_key(),
                label
                    .gold
                    .map_or_else(|| "(none)".to_owned(), |g| g.canonical_key()),
            );
        }
    }

    // Repetition loops: decoders stuck in a cycle repeat a short tail.
    let config = RepetitionConfig::default();
    let outputs = [
        "The 1 Decembrie 1918 University is located in Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucuresti Bucu",
        "Abilene is part of Jones County Texas . Abilene is part of Jones County Texas . Abilene is part of Jones County Texas .",
        "The runway at Aarhus Airport is 2702 metres long.",
    ];
    println!();
    for sentence in outputs {
        let tokens: Vec<&str> = sentence.split_whitespace().collect();
        let flag = detect_repetition(&tokens, &config)?;
        if flag.flagged {
            println!(
                "LOOP period={} repeats={} from token {}: {}...",
                flag.period,
                flag.repeats,
                flag.start_index,
                &sentence[..40.min(sentence.len())]
            );
        } else {
            println!("ok   {}", &sentence[..40.min(sentence.len())]);
        }
    }
    Ok(())
}
