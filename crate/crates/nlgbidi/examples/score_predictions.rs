//! Scoring model outputs in both directions: triple-set F1 and aligned
//! edit distance for text-to-data, BLEU-4 and Rouge-L for data-to-text,
//! plus corpus-level aggregation.
//!
//! Run with `cargo run --example score_predictions`.

use nlgbidi::linearize::parse_triples;
use nlgbidi::metrics::{
    aggregate_scores, align_and_edit, bleu4, rouge_l, set_f1, GenScore, RecordScore,
};
use nlgbidi::pipeline::load_corpus;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = load_corpus(
        &Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus.jsonl"),
        None,
    )?;
    let record = |id: u64| {
        corpus
            .records()
            .iter()
            .find(|r| r.id() == id)
            .expect("fixture id")
    };

    // --- text-to-data: the model emits a flat triple line -------------
    let gold = record(241).triples();
    for (label, output) in [
        ("exact", "mexico | language | spanish language ;"),
        ("swapped", "spanish language | language | mexico ;"),
        ("close", "mexico | languages | spanish language ;"),
    ] {
        let pred = parse_triples(output)?;
        let f1 = set_f1(&pred, gold)?;
        let edit = align_and_edit(&pred, gold)?;
        println!(
            "s2d {label:8} f1={:.3} (tp={} fp={} fn={})  edit total={} whole-string={}",
            f1.f1, f1.true_positives, f1.false_positives, f1.false_negatives,
            edit.total, edit.whole_string_distance,
        );
    }

    // --- data-to-text: the model emits a sentence ---------------------
    let refs = record(241).references();
    println!();
    for (label, sentence) in [
        ("verbatim", "The language of Mexico is Spanish."),
        ("reworded", "Spanish is what they speak in Mexico."),
        ("unrelated", "The cat sat on the mat."),
    ] {
        let b = bleu4(sentence, refs)?;
        let r = rouge_l(sentence, refs)?;
        println!("d2s {label:9} bleu4={b:.4} rouge_l={r:.4}");
    }

    // --- corpus-level roll-up ------------------------------------------
    // Score every record against its own first reference (a ceiling run:
    // perfect generation reproduces a reference verbatim).
    let scores: Vec<RecordScore> = corpus
        .records()
        .iter()
        .map(|r| {
            let hyp = &r.references()[0];
            Ok(RecordScore::Gen(GenScore {
                bleu4: bleu4(hyp, r.references())?,
                rouge_l: rouge_l(hyp, r.references())?,
            }))
        })
        .collect::<Result<_, Box<dyn std::error::Error>>>()?;
    let summary = aggregate_scores(&scores)?;
    println!(
        "\nceiling run over {} records: mean bleu4 {:?}, mean rouge_l {:?}",
        summary.records, summary.mean_bleu4, summary.mean_rouge_l
    );
    Ok(())
}
