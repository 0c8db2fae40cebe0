//! From a corpus to a bidirectional training stream: build both task
//! directions, interleave them A/B, and inject synthetic examples at
//! seeded random positions — byte-for-byte reproducibly.
//!
//! Run with `cargo run --example build_training_stream`.

use nlgbidi::linearize::{TaskExample, TaskKind};
use nlgbidi::pipeline::{
    inject_synthetic, interleave, load_corpus, task_stream,
};
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = load_corpus(
        &Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus.jsonl"),
        None,
    )?;

    // One example per (record, reference) pair, in each direction. Task
    // prefixes mark the direction for a shared encoder-decoder.
    let d2s = task_stream(&corpus, TaskKind::D2s, true);
    let s2d = task_stream(&corpus, TaskKind::S2d, true);
    println!("{} data-to-sentence + {} sentence-to-data examples", d2s.len(), s2d.len());

    let mixed = interleave(&d2s, &s2d)?;
    println!("\nfirst four of the interleaved stream:");
    for example in &mixed[..4] {
        let input = &example.input[..60.min(example.input.len())];
        println!("  [{}] record {:>3}  {input}...", example.task.prefix(), example.record_id);
    }

    // Synthetic examples (here: two hand-written ones, ids well clear of
    // the corpus range) are spliced in at positions drawn from a seeded
    // generator, so the same seed always yields the same stream.
    let synthetic = vec![
        TaskExample {
            task: TaskKind::D2s,
            input: "d2t 0: helen alvarez | occupation | television producer ;".to_owned(),
            target: "helen alvarez is a television producer.".to_owned(),
            record_id: 9001,
        },
        TaskExample {
            task: TaskKind::S2d,
            input: "t2d 1: david osei plays for accra hearts of oak.".to_owned(),
            target: "david osei | club | accra hearts of oak ;".to_owned(),
            record_id: 9002,
        },
    ];
    let injected = inject_synthetic(&mixed, &synthetic, 7)?;
    let again = inject_synthetic(&mixed, &synthetic, 7)?;
    assert_eq!(injected.len(), mixed.len() + synthetic.len());
    assert_eq!(injected, again, "same seed, same stream");

    let positions: Vec<usize> = injected
        .iter()
        .enumerate()
        .filter(|(_, e)| e.record_id >= 9000)
        .map(|(i, _)| i)
        .collect();
    println!(
        "\nseed 7 placed the {} synthetic examples at positions {positions:?} of {}",
        synthetic.len(),
        injected.len()
    );

    let other: Vec<usize> = inject_synthetic(&mixed, &synthetic, 8)?
        .iter()
        .enumerate()
        .filter(|(_, e)| e.record_id >= 9000)
        .map(|(i, _)| i)
        .collect();
    println!("seed 8 places them at {other:?} instead");
    Ok(())
}
