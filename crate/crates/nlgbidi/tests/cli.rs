//! End-to-end tests for the command-line interface, driven through
//! [`nlgbidi::cli::dispatch`] so exit codes are observable without
//! spawning processes. Output always goes through `--out` files; stdout
//! is never inspected.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use nlgbidi::cli::dispatch;

/// Guards tests that read or write the `NLGBIDI_CONFIG` environment
/// variable; the test harness runs threads in parallel and the variable
/// is process-global.
static ENV_LOCK: Mutex<()> = Mutex::new(());

fn run(args: &[&str]) -> i32 {
    dispatch(std::iter::once("nlgbidi").chain(args.iter().copied()))
}

fn data_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn corpus_arg() -> String {
    data_path("corpus.jsonl").to_str().unwrap().to_owned()
}

fn read_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
        .lines()
        .map(str::to_owned)
        .collect()
}

#[test]
fn stats_reports_fixture_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stats.csv");
    let relations = dir.path().join("relations.csv");
    let code = run(&[
        "stats",
        "--corpus",
        &corpus_arg(),
        "--expect-splits",
        "40,5,5",
        "--csv",
        "--out",
        out.to_str().unwrap(),
        "--relations-out",
        relations.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let table = fs::read_to_string(&out).unwrap();
    assert!(table.contains("reference_text"), "missing row: {table}");
    assert!(table.contains("serialized_rdf"));
    assert!(table.contains("75.4625"), "unexpected mean: {table}");
    assert!(table.contains("92.96"));
    let rel = read_lines(&relations);
    assert_eq!(rel[0], "relation,count");
    assert!(rel.len() > 10, "relation table too short: {}", rel.len());
}

#[test]
fn stats_split_mismatch_is_a_finding() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stats.txt");
    let code = run(&[
        "stats",
        "--corpus",
        &corpus_arg(),
        "--expect-splits",
        "1,2,3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "split mismatch must exit 1");
}

#[test]
fn lint_clean_corpus_passes_and_fix_copies_everything() {
    let dir = tempfile::tempdir().unwrap();
    let findings = dir.path().join("findings.txt");
    let cleaned = dir.path().join("cleaned.jsonl");
    let code = run(&[
        "lint",
        "--corpus",
        &corpus_arg(),
        "--out",
        findings.to_str().unwrap(),
        "--fix",
        cleaned.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "fixture corpus must lint clean");
    assert_eq!(read_lines(&cleaned).len(), 50);
}

#[test]
fn lint_flags_bad_lines_and_fix_drops_them() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("dirty.jsonl");
    fs::write(
        &corpus,
        concat!(
            r#"{"id":1,"split":"train","source":"webnlg","triples":[["Mexico","language","Spanish"]],"references":["Spanish is spoken."]}"#,
            "\n",
            r#"{"id":2,"split":"train","source":"webnlg","triples":[["A|B","language","Spanish"]],"references":["Broken term."]}"#,
            "\nnot json at all\n",
        ),
    )
    .unwrap();
    let findings = dir.path().join("findings.txt");
    let cleaned = dir.path().join("cleaned.jsonl");
    let code = run(&[
        "lint",
        "--corpus",
        corpus.to_str().unwrap(),
        "--out",
        findings.to_str().unwrap(),
        "--fix",
        cleaned.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "findings must exit 1");
    let reported = read_lines(&findings);
    assert!(reported.iter().any(|l| l.starts_with("line 2:")), "{reported:?}");
    assert!(reported.iter().any(|l| l.starts_with("line 3:")), "{reported:?}");
    assert_eq!(read_lines(&cleaned).len(), 1, "only the good record survives");

    let lenient = run(&[
        "lint",
        "--corpus",
        corpus.to_str().unwrap(),
        "--lenient",
        "--out",
        findings.to_str().unwrap(),
    ]);
    assert_eq!(lenient, 0, "--lenient suppresses the failure code");
}

#[test]
fn serialize_then_parse_round_trips_the_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.jsonl");
    let parsed = dir.path().join("parsed.jsonl");
    assert_eq!(
        run(&["serialize", "--corpus", &corpus_arg(), "--out", flat.to_str().unwrap()]),
        0
    );
    let flat_lines = read_lines(&flat);
    assert_eq!(flat_lines.len(), 50);
    let sample = flat_lines
        .iter()
        .find(|l| l.contains("\"record_id\":241"))
        .expect("record 241 present");
    assert!(
        sample.contains("mexico | language | spanish language ;"),
        "unexpected flat form: {sample}"
    );

    assert_eq!(
        run(&["parse", "--input", flat.to_str().unwrap(), "--out", parsed.to_str().unwrap()]),
        0
    );
    let parsed_lines = read_lines(&parsed);
    assert_eq!(parsed_lines.len(), 50);
    let sample: serde_json::Value = parsed_lines
        .iter()
        .map(|l| serde_json::from_str(l).unwrap())
        .find(|v: &serde_json::Value| v["record_id"] == 241)
        .unwrap();
    assert_eq!(
        sample["triples"],
        serde_json::json!([["mexico", "language", "spanish language"]])
    );
}

#[test]
fn parse_accepts_raw_lines_and_reports_malformed_ones() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("raw.txt");
    fs::write(
        &input,
        "d2t 0: mexico | language | spanish language ;\nno pipes in sight\n",
    )
    .unwrap();
    let out = dir.path().join("parsed.jsonl");
    let code = run(&["parse", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1, "the malformed line is a finding");
    let parsed = read_lines(&out);
    assert_eq!(parsed.len(), 1, "only the good line parses");
    assert!(parsed[0].contains("spanish language"));

    let lenient = run(&[
        "parse",
        "--input",
        input.to_str().unwrap(),
        "--lenient",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(lenient, 0);
}

#[test]
fn compress_then_decompress_restores_serialize_output() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.jsonl");
    let compressed = dir.path().join("compressed.jsonl");
    let restored = dir.path().join("restored.jsonl");
    assert_eq!(
        run(&["serialize", "--corpus", &corpus_arg(), "--out", flat.to_str().unwrap()]),
        0
    );
    assert_eq!(
        run(&["compress", "--corpus", &corpus_arg(), "--out", compressed.to_str().unwrap()]),
        0
    );
    assert_eq!(
        run(&["decompress", "--input", compressed.to_str().unwrap(), "--out", restored.to_str().unwrap()]),
        0
    );
    assert_eq!(
        fs::read_to_string(&flat).unwrap(),
        fs::read_to_string(&restored).unwrap(),
        "decompress must reproduce the serialized corpus exactly"
    );
    // At least one record in the fixture profits from binding.
    let docs = read_lines(&compressed);
    assert_eq!(docs.len(), 50);
    assert!(
        docs.iter().any(|l| l.contains("let A = ")),
        "no bindings anywhere in the fixture compression"
    );
}

#[test]
fn ingest_reports_rejections_and_keeps_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("accepted.jsonl");
    let report = dir.path().join("report.json");
    let code = run(&[
        "ingest-synthetic",
        "--input",
        data_path("synthetic.jsonl").to_str().unwrap(),
        "--start-id",
        "5000",
        "--out",
        out.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "rejections must exit 1");
    assert_eq!(read_lines(&out).len(), 8);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["requested"], 10);
    assert_eq!(report["content_filtered"], 0);
    assert_eq!(report["malformed"], 2);
    assert_eq!(report["accepted"], 8);

    let lenient = run(&[
        "ingest-synthetic",
        "--input",
        data_path("synthetic.jsonl").to_str().unwrap(),
        "--start-id",
        "5000",
        "--lenient",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(lenient, 0);
}

#[test]
fn score_d2s_exact_match_scores_one() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.jsonl");
    fs::write(
        &pred,
        concat!(
            r#"{"record_id":241,"output":"The language of Mexico is Spanish."}"#,
            "\n",
            r#"{"record_id":243,"output":"Shumai is a variation of the dish Siomay."}"#,
            "\n",
        ),
    )
    .unwrap();
    let out = dir.path().join("scores.csv");
    let summary = dir.path().join("summary.json");
    let code = run(&[
        "score",
        "--task",
        "d2s",
        "--pred",
        pred.to_str().unwrap(),
        "--gold",
        &corpus_arg(),
        "--out",
        out.to_str().unwrap(),
        "--summary-out",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let rows = read_lines(&out);
    assert_eq!(rows[0], "record_id,task,f1,tp,fp,fn,edit_total,bleu4,rouge_l");
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("241,d2s,"), "{}", rows[1]);
    assert!(rows[1].ends_with("1.0,1.0"), "exact match must score 1.0: {}", rows[1]);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(summary["records"], 2);
    assert_eq!(summary["task"], "d2s");
    assert_eq!(summary["mean_bleu4"], 1.0);
    assert_eq!(summary["missing_gold"], 0);
}

#[test]
fn score_s2d_reports_f1_and_missing_gold() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.jsonl");
    fs::write(
        &pred,
        concat!(
            r#"{"record_id":241,"output":"mexico | language | spanish language ;"}"#,
            "\n",
            r#"{"record_id":99999,"output":"a | b | c ;"}"#,
            "\n",
        ),
    )
    .unwrap();
    let out = dir.path().join("scores.csv");
    let summary = dir.path().join("summary.json");
    let strict = run(&[
        "score",
        "--task",
        "s2d",
        "--pred",
        pred.to_str().unwrap(),
        "--gold",
        &corpus_arg(),
        "--out",
        out.to_str().unwrap(),
        "--summary-out",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(strict, 1, "a prediction without gold must exit 1");
    let rows = read_lines(&out);
    assert_eq!(rows.len(), 2, "only the matched record is scored");
    assert!(rows[1].starts_with("241,s2d,1.0,1,0,0,0,"), "{}", rows[1]);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(summary["mean_f1"], 1.0);
    assert_eq!(summary["missing_gold"], 1);
    assert_eq!(summary["parse_failures"], 0);

    let lenient = run(&[
        "score",
        "--task",
        "s2d",
        "--pred",
        pred.to_str().unwrap(),
        "--gold",
        &corpus_arg(),
        "--lenient",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(lenient, 0);
}

#[test]
fn diagnose_mismatch_labels_swapped_arguments() {
    let _guard = ENV_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    std::env::remove_var("NLGBIDI_CONFIG");
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.jsonl");
    fs::write(
        &pred,
        concat!(
            r#"{"record_id":241,"output":"spanish language | language | mexico ;"}"#,
            "\n",
        ),
    )
    .unwrap();
    let out = dir.path().join("labels.jsonl");
    let code = run(&[
        "diagnose",
        "--pred",
        pred.to_str().unwrap(),
        "--gold",
        &corpus_arg(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "labels are findings");
    let labels = read_lines(&out);
    assert_eq!(labels.len(), 1);
    let label: serde_json::Value = serde_json::from_str(&labels[0]).unwrap();
    assert_eq!(label["record_id"], 241);
    assert_eq!(label["kind"], "swapped_arguments");
    assert_eq!(label["gold"], "mexico | language | spanish language");
}

#[test]
fn diagnose_repetition_flags_a_loop() {
    let _guard = ENV_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    std::env::remove_var("NLGBIDI_CONFIG");
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.jsonl");
    let looping = format!("The airport is located in{}", " Denmark".repeat(12));
    fs::write(
        &pred,
        format!("{{\"record_id\":7,\"output\":\"{looping}\"}}\n{{\"record_id\":8,\"output\":\"A perfectly ordinary sentence.\"}}\n"),
    )
    .unwrap();
    let out = dir.path().join("flags.jsonl");
    let code = run(&[
        "diagnose",
        "--mode",
        "repetition",
        "--pred",
        pred.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    let flags = read_lines(&out);
    assert_eq!(flags.len(), 1, "only the looping output is flagged");
    let flag: serde_json::Value = serde_json::from_str(&flags[0]).unwrap();
    assert_eq!(flag["record_id"], 7);
    assert_eq!(flag["kind"], "repetition_loop");
    assert_eq!(flag["period"], 1);
    assert_eq!(flag["repeats"], 12);
}

#[test]
fn config_file_raises_the_repetition_bar() {
    let _guard = ENV_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("settings.toml");
    fs::write(&config, "[repetition]\nmin_repeats = 20\n").unwrap();
    let pred = dir.path().join("pred.jsonl");
    let looping = format!("The airport is located in{}", " Denmark".repeat(12));
    fs::write(&pred, format!("{{\"record_id\":7,\"output\":\"{looping}\"}}\n")).unwrap();
    let out = dir.path().join("flags.jsonl");

    std::env::set_var("NLGBIDI_CONFIG", &config);
    let code = run(&[
        "diagnose",
        "--mode",
        "repetition",
        "--pred",
        pred.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    std::env::remove_var("NLGBIDI_CONFIG");
    assert_eq!(code, 0, "a 12-cycle tail is below the configured threshold");
    assert_eq!(read_lines(&out).len(), 0);
}

#[test]
fn interleave_streams_match_the_golden_injection() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mixed.jsonl");
    let code = run(&[
        "interleave",
        "--d2s",
        data_path("stream_d2s.jsonl").to_str().unwrap(),
        "--s2d",
        data_path("stream_s2d.jsonl").to_str().unwrap(),
        "--synthetic",
        data_path("stream_synthetic.jsonl").to_str().unwrap(),
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        fs::read(&out).unwrap(),
        fs::read(data_path("injected_seed7.jsonl")).unwrap(),
        "seeded injection must reproduce the golden bytes"
    );
}

#[test]
fn interleave_corpus_mode_pairs_every_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mixed.jsonl");
    let code = run(&[
        "interleave",
        "--corpus",
        &corpus_arg(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let lines = read_lines(&out);
    assert_eq!(lines.len(), 160, "80 references x 2 tasks");
    let first: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    let second: serde_json::Value = serde_json::from_str(&lines[1]).unwrap();
    assert_eq!(first["task"], "d2s");
    assert_eq!(second["task"], "s2d");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["no-such-command"]), 2);
    assert_eq!(run(&["score", "--task", "d2s"]), 2, "missing required flags");
    assert_eq!(
        run(&["interleave", "--corpus", "x.jsonl", "--d2s", "y.jsonl"]),
        2,
        "corpus and stream sources are mutually exclusive"
    );
}

#[test]
fn io_and_schema_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["stats", "--corpus", dir.path().join("absent.jsonl").to_str().unwrap()]),
        3,
        "missing input file"
    );
    let garbled = dir.path().join("garbled.jsonl");
    fs::write(&garbled, "{\"record_id\": \"not a number\"}\n").unwrap();
    assert_eq!(
        run(&["decompress", "--input", garbled.to_str().unwrap()]),
        3,
        "schema violation in structured input"
    );
}
