//! Command-line front end.
//!
//! Every subcommand is a thin shell over one library module: it reads files,
//! calls the module, writes results, and prints a one-line machine-readable
//! summary on stderr. Exit codes are part of the contract:
//!
//! * `0` — clean run
//! * `1` — the run finished but individual records failed or were flagged
//!   (suppressed by `--lenient` where the flag exists)
//! * `2` — usage error (bad flags, unknown subcommand)
//! * `3` — I/O or schema error (unreadable file, malformed JSON line)
//!
//! All randomized behaviour takes an explicit `--seed`; there is no hidden
//! entropy source, so reruns with the same inputs produce identical bytes.

use crate::compress::{compress, decompress, CompressedDoc};
use crate::config;
use crate::diagnostics::{classify_mismatches_in, detect_repetition};
use crate::linearize::{parse_triples, serialize_triples, strip_task_prefix, TaskKind};
use crate::metrics::{align_and_edit, bleu4, rouge_l, set_f1};
use crate::model::{Record, RecordJson, TripleSet};
use crate::pipeline::{
    ingest_synthetic, inject_synthetic, interleave, load_corpus, read_task_examples, task_stream,
    write_task_examples, SyntheticEnvelope,
};
use crate::stats::{
    length_stats_with, record_shape_stats_with, relation_frequency, LengthField, StdMode,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Runs the CLI against an argv sequence and returns the process exit code.
///
/// The first element of `argv` is the program name, as in `std::env::args`.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            3
        }
    }
}

#[derive(Parser)]
#[command(
    name = "nlgbidi",
    version,
    about = "Corpus engineering and evaluation for bidirectional data-to-text sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus statistics: length distributions, relation frequencies, shape.
    Stats(StatsArgs),
    /// Check corpus records for schema and term violations.
    Lint(LintArgs),
    /// Flatten each record's triples to the pipe/semicolon grammar.
    Serialize(SerializeArgs),
    /// Parse flat triple text back into structured triples.
    Parse(ParseArgs),
    /// Rewrite each record with let-bindings for repeated terms.
    Compress(CompressArgs),
    /// Expand let-bound documents back to flat triple text.
    Decompress(DecompressArgs),
    /// Build an alternating two-task training stream.
    Interleave(InterleaveArgs),
    /// Validate model-annotated sentences and mint corpus records.
    #[command(name = "ingest-synthetic")]
    IngestSynthetic(IngestArgs),
    /// Score predictions against gold records (set F1, edit, BLEU, Rouge).
    Score(ScoreArgs),
    /// Label mismatched triples or scan generations for repetition loops.
    Diagnose(DiagnoseArgs),
}

#[derive(Args)]
struct StatsArgs {
    /// Corpus JSON Lines file.
    #[arg(long)]
    corpus: PathBuf,
    /// Fail unless the train,dev,test record counts match (e.g. 100,10,10).
    #[arg(long, value_parser = parse_split_counts)]
    expect_splits: Option<(usize, usize, usize)>,
    /// Use the n-1 (sample) standard deviation instead of population.
    #[arg(long)]
    sample_std: bool,
    /// Write relation frequencies as CSV to this file.
    #[arg(long)]
    relations_out: Option<PathBuf>,
    /// Emit the stats table as CSV instead of an aligned text table.
    #[arg(long)]
    csv: bool,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct LintArgs {
    /// Corpus JSON Lines file.
    #[arg(long)]
    corpus: PathBuf,
    /// Write a cleaned copy (canonical triples, folded references) here;
    /// lines that cannot be repaired are dropped from it.
    #[arg(long)]
    fix: Option<PathBuf>,
    /// Report findings but exit 0 anyway.
    #[arg(long)]
    lenient: bool,
    /// Findings output (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SerializeArgs {
    /// Corpus JSON Lines file.
    #[arg(long)]
    corpus: PathBuf,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParseArgs {
    /// Input file: either raw flat lines or the JSON emitted by `serialize`.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Report malformed lines but exit 0 anyway.
    #[arg(long)]
    lenient: bool,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompressArgs {
    /// Corpus JSON Lines file.
    #[arg(long)]
    corpus: PathBuf,
    /// Bind only terms occurring at least this often (minimum 2).
    #[arg(long, default_value_t = 2)]
    min_occurrences: usize,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecompressArgs {
    /// JSON Lines from `compress`: {"record_id", "compressed"}.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Report undecodable documents but exit 0 anyway.
    #[arg(long)]
    lenient: bool,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InterleaveArgs {
    /// Build both task streams from this corpus.
    #[arg(long, conflicts_with_all = ["d2s", "s2d"], required_unless_present = "d2s")]
    corpus: Option<PathBuf>,
    /// Pre-built data-to-sentence examples (requires --s2d).
    #[arg(long, requires = "s2d")]
    d2s: Option<PathBuf>,
    /// Pre-built sentence-to-data examples (requires --d2s).
    #[arg(long, requires = "d2s")]
    s2d: Option<PathBuf>,
    /// Prepend the task-tag prefixes to inputs (corpus source only).
    #[arg(long)]
    with_prefix: bool,
    /// Synthetic examples to inject at seeded random positions.
    #[arg(long, requires = "seed")]
    synthetic: Option<PathBuf>,
    /// Seed for the injection positions.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    /// Envelope JSON Lines: {"sentence", "annotation", "blocked"?}.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Record id assigned to the first accepted record.
    #[arg(long, default_value_t = 0)]
    start_id: u64,
    /// Write the ingestion report as JSON to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Count rejections but exit 0 anyway.
    #[arg(long)]
    lenient: bool,
    /// Accepted records output (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    D2s,
    S2d,
}

impl TaskArg {
    fn name(self) -> &'static str {
        match self {
            TaskArg::D2s => "d2s",
            TaskArg::S2d => "s2d",
        }
    }
}

#[derive(Args)]
struct ScoreArgs {
    /// Which task the predictions answer.
    #[arg(long, value_enum)]
    task: TaskArg,
    /// Prediction JSON Lines: {"record_id", "output"}.
    #[arg(long)]
    pred: PathBuf,
    /// Gold corpus JSON Lines file.
    #[arg(long)]
    gold: PathBuf,
    /// Write the aggregate summary as JSON to this file.
    #[arg(long)]
    summary_out: Option<PathBuf>,
    /// Report missing gold records but exit 0 anyway.
    #[arg(long)]
    lenient: bool,
    /// Per-record CSV output (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DiagnoseMode {
    /// Classify unmatched predicted triples against gold.
    Mismatch,
    /// Scan generated sentences for trailing repetition loops.
    Repetition,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[arg(long, value_enum, default_value_t = DiagnoseMode::Mismatch)]
    mode: DiagnoseMode,
    /// Prediction JSON Lines: {"record_id", "output"}.
    #[arg(long)]
    pred: PathBuf,
    /// Gold corpus JSON Lines file (mismatch mode only).
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Report findings but exit 0 anyway.
    #[arg(long)]
    lenient: bool,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Corpus(#[from] crate::pipeline::PipelineError),
    #[error("{path}:{line}: {message}")]
    Schema {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Config(#[from] config::ConfigError),
    #[error("csv write failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("--gold is required in mismatch mode")]
    MissingGold,
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Wraps an output-side I/O failure (stdout or the `--out` file).
fn werr(source: std::io::Error) -> CliError {
    io_err(Path::new("<out>"), source)
}

fn jerr(source: serde_json::Error) -> CliError {
    werr(source.into())
}

fn open_out(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_err(p, e))?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

/// Reads a JSON Lines file, applying `f` to each non-blank line. A closure
/// error aborts the run with exit code 3 and the offending line number.
fn read_jsonl<T, F>(path: &Path, mut f: F) -> Result<Vec<T>, CliError>
where
    F: FnMut(usize, &str) -> Result<T, String>,
{
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(f(index + 1, &line).map_err(|message| CliError::Schema {
            path: path.display().to_string(),
            line: index + 1,
            message,
        })?);
    }
    Ok(out)
}

fn exit_for(findings: usize, lenient: bool) -> i32 {
    if findings > 0 && !lenient {
        1
    } else {
        0
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Stats(args) => run_stats(args),
        Command::Lint(args) => run_lint(args),
        Command::Serialize(args) => run_serialize(args),
        Command::Parse(args) => run_parse(args),
        Command::Compress(args) => run_compress(args),
        Command::Decompress(args) => run_decompress(args),
        Command::Interleave(args) => run_interleave(args),
        Command::IngestSynthetic(args) => run_ingest(args),
        Command::Score(args) => run_score(args),
        Command::Diagnose(args) => run_diagnose(args),
    }
}

fn parse_split_counts(text: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated counts, e.g. 100,10,10".into());
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad count {s:?}"))
    };
    Ok((parse(parts[0])?, parse(parts[1])?, parse(parts[2])?))
}

fn thread_pool(jobs: usize) -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if jobs > 0 {
        builder = builder.num_threads(jobs);
    }
    builder.build().expect("thread pool construction")
}

// ---------------------------------------------------------------- stats

fn run_stats(args: StatsArgs) -> Result<i32, CliError> {
    let corpus = load_corpus(&args.corpus, None)?;
    if let Some(expected) = args.expect_splits {
        let actual = corpus.split_counts();
        if actual != expected {
            eprintln!(
                "stats records={} status=split-mismatch expected={:?} actual={:?}",
                corpus.len(),
                expected,
                actual
            );
            return Ok(1);
        }
    }
    if corpus.is_empty() {
        eprintln!("stats records=0 status=empty");
        return Ok(1);
    }
    let mode = if args.sample_std {
        StdMode::Sample
    } else {
        StdMode::Population
    };

    // The three stat families are independent; compute them in parallel.
    let pool = thread_pool(args.jobs);
    let ((text, rdf), shape) = pool.install(|| {
        rayon::join(
            || {
                rayon::join(
                    || length_stats_with(&corpus, LengthField::ReferenceText, mode),
                    || length_stats_with(&corpus, LengthField::SerializedRdf, mode),
                )
            },
            || record_shape_stats_with(&corpus, mode),
        )
    });
    let text = text.expect("non-empty corpus has reference lengths");
    let rdf = rdf.expect("non-empty corpus has serialized lengths");
    let shape = shape.expect("non-empty corpus has shape stats");

    let mut out = open_out(args.out.as_ref())?;
    if args.csv {
        writeln!(out, "field,mean,std,min,p25,p50,p75,max").map_err(werr)?;
        for (name, s) in [("reference_text", &text), ("serialized_rdf", &rdf)] {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                name, s.mean, s.std, s.min, s.p25, s.p50, s.p75, s.max
            )
            .map_err(werr)?;
        }
        writeln!(out).map_err(werr)?;
        writeln!(
            out,
            "refs_per_record_mean,triples_per_set_mean,triples_per_set_std"
        )
        .map_err(werr)?;
        writeln!(
            out,
            "{},{},{}",
            shape.refs_per_record_mean, shape.triples_per_set_mean, shape.triples_per_set_std
        )
        .map_err(werr)?;
    } else {
        writeln!(
            out,
            "{:<16} {:>10} {:>10} {:>8} {:>8} {:>8} {:>8} {:>8}",
            "field", "mean", "std", "min", "p25", "p50", "p75", "max"
        )
        .map_err(werr)?;
        for (name, s) in [("reference_text", &text), ("serialized_rdf", &rdf)] {
            writeln!(
                out,
                "{:<16} {:>10.2} {:>10.2} {:>8.1} {:>8.1} {:>8.1} {:>8.1} {:>8.1}",
                name, s.mean, s.std, s.min, s.p25, s.p50, s.p75, s.max
            )
            .map_err(werr)?;
        }
        writeln!(
            out,
            "references/record {:.2}  triples/set {:.2} (std {:.2})",
            shape.refs_per_record_mean, shape.triples_per_set_mean, shape.triples_per_set_std
        )
        .map_err(werr)?;
    }
    out.flush().map_err(werr)?;

    if let Some(rel_path) = &args.relations_out {
        let mut writer = csv::Writer::from_path(rel_path)?;
        writer.write_record(["relation", "count"])?;
        let rows = relation_frequency(&corpus).expect("non-empty corpus has relations");
        for row in rows {
            writer.write_record([row.relation.as_str(), &row.count.to_string()])?;
        }
        writer.flush().map_err(|e| io_err(rel_path, e))?;
    }

    eprintln!("stats records={} status=ok", corpus.len());
    Ok(0)
}

// ---------------------------------------------------------------- lint

fn run_lint(args: LintArgs) -> Result<i32, CliError> {
    let file = File::open(&args.corpus).map_err(|e| io_err(&args.corpus, e))?;
    let mut out = open_out(args.out.as_ref())?;
    let mut fixed = match &args.fix {
        Some(p) => {
            let writer = BufWriter::new(File::create(p).map_err(|e| io_err(p, e))?);
            Some((p.clone(), writer))
        }
        None => None,
    };

    let mut lines = 0usize;
    let mut findings = 0usize;
    let mut kept = 0usize;
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(&args.corpus, e))?;
        if line.trim().is_empty() {
            continue;
        }
        lines += 1;
        let lineno = index + 1;
        let record = serde_json::from_str::<RecordJson>(&line)
            .map_err(|e| e.to_string())
            .and_then(|json| json.into_record().map_err(|e| e.to_string()));
        match record {
            Ok(record) => {
                if let Some((path, writer)) = fixed.as_mut() {
                    let clean = RecordJson::from_record_cleaned(&record);
                    serde_json::to_writer(&mut *writer, &clean)
                        .map_err(|e| io_err(path, e.into()))?;
                    writeln!(writer).map_err(|e| io_err(path, e))?;
                    kept += 1;
                }
            }
            Err(message) => {
                findings += 1;
                writeln!(out, "line {lineno}: {message}").map_err(werr)?;
            }
        }
    }
    out.flush().map_err(werr)?;
    if let Some((path, mut writer)) = fixed {
        writer.flush().map_err(|e| io_err(&path, e))?;
    }

    eprintln!(
        "lint lines={lines} findings={findings} kept={kept} status={}",
        if findings == 0 { "ok" } else { "failures" }
    );
    Ok(exit_for(findings, args.lenient))
}

// ------------------------------------------------------- serialize / parse

#[derive(Serialize, Deserialize)]
struct FlatLine {
    record_id: u64,
    flat: String,
}

fn run_serialize(args: SerializeArgs) -> Result<i32, CliError> {
    let corpus = load_corpus(&args.corpus, None)?;
    let mut out = open_out(args.out.as_ref())?;
    for record in corpus.records() {
        let line = FlatLine {
            record_id: record.id(),
            flat: serialize_triples(record.triples())
                .expect("records always hold at least one triple"),
        };
        serde_json::to_writer(&mut out, &line).map_err(jerr)?;
        writeln!(out).map_err(werr)?;
    }
    out.flush().map_err(werr)?;
    eprintln!("serialize records={} status=ok", corpus.len());
    Ok(0)
}

#[derive(Serialize)]
struct ParsedLine {
    line: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    record_id: Option<u64>,
    triples: Vec<[String; 3]>,
}

fn run_parse(args: ParseArgs) -> Result<i32, CliError> {
    let file = File::open(&args.input).map_err(|e| io_err(&args.input, e))?;
    let mut out = open_out(args.out.as_ref())?;
    let mut parsed = 0usize;
    let mut findings = 0usize;
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(&args.input, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = index + 1;
        // Accept both `serialize` output and raw flat text.
        let (record_id, flat) = match serde_json::from_str::<FlatLine>(&line) {
            Ok(fl) => (Some(fl.record_id), fl.flat),
            Err(_) => (None, line.clone()),
        };
        match parse_triples(strip_task_prefix(&flat).1) {
            Ok(set) => {
                parsed += 1;
                let row = ParsedLine {
                    line: lineno,
                    record_id,
                    triples: set
                        .iter()
                        .map(|t| {
                            [
                                t.subject().canonical().to_string(),
                                t.relation().canonical().to_string(),
                                t.object().canonical().to_string(),
                            ]
                        })
                        .collect(),
                };
                serde_json::to_writer(&mut out, &row).map_err(jerr)?;
                writeln!(out).map_err(werr)?;
            }
            Err(err) => {
                findings += 1;
                eprintln!("line {lineno}: {err}");
            }
        }
    }
    out.flush().map_err(werr)?;
    eprintln!(
        "parse parsed={parsed} findings={findings} status={}",
        if findings == 0 { "ok" } else { "failures" }
    );
    Ok(exit_for(findings, args.lenient))
}

// ---------------------------------------------------- compress / decompress

#[derive(Serialize, Deserialize)]
struct CompressedLine {
    record_id: u64,
    compressed: String,
}

fn run_compress(args: CompressArgs) -> Result<i32, CliError> {
    let corpus = load_corpus(&args.corpus, None)?;
    let mut out = open_out(args.out.as_ref())?;
    let mut findings = 0usize;
    for record in corpus.records() {
        match compress(record.triples(), args.min_occurrences) {
            Ok(doc) => {
                let line = CompressedLine {
                    record_id: record.id(),
                    compressed: doc.to_text(),
                };
                serde_json::to_writer(&mut out, &line).map_err(jerr)?;
                writeln!(out).map_err(werr)?;
            }
            Err(err) => {
                findings += 1;
                eprintln!("record {}: {err}", record.id());
            }
        }
    }
    out.flush().map_err(werr)?;
    eprintln!(
        "compress records={} findings={findings} status={}",
        corpus.len(),
        if findings == 0 { "ok" } else { "failures" }
    );
    Ok(exit_for(findings, false))
}

fn run_decompress(args: DecompressArgs) -> Result<i32, CliError> {
    let entries: Vec<CompressedLine> = read_jsonl(&args.input, |_, line| {
        serde_json::from_str(line).map_err(|e| e.to_string())
    })?;
    let mut out = open_out(args.out.as_ref())?;
    let mut findings = 0usize;
    for entry in &entries {
        let doc = CompressedDoc::from_text(&entry.compressed);
        match decompress(&doc) {
            Ok(set) => {
                let line = FlatLine {
                    record_id: entry.record_id,
                    flat: serialize_triples(&set)
                        .expect("decompressed documents hold at least one triple"),
                };
                serde_json::to_writer(&mut out, &line).map_err(jerr)?;
                writeln!(out).map_err(werr)?;
            }
            Err(err) => {
                findings += 1;
                eprintln!("record {}: {err}", entry.record_id);
            }
        }
    }
    out.flush().map_err(werr)?;
    eprintln!(
        "decompress records={} findings={findings} status={}",
        entries.len(),
        if findings == 0 { "ok" } else { "failures" }
    );
    Ok(exit_for(findings, args.lenient))
}

// ---------------------------------------------------------------- interleave

fn run_interleave(args: InterleaveArgs) -> Result<i32, CliError> {
    let (d2s_stream, s2d_stream) = if let Some(corpus_path) = &args.corpus {
        let corpus = load_corpus(corpus_path, None)?;
        (
            task_stream(&corpus, TaskKind::D2s, args.with_prefix),
            task_stream(&corpus, TaskKind::S2d, args.with_prefix),
        )
    } else {
        let d2s_path = args.d2s.as_ref().expect("clap enforces the source group");
        let s2d_path = args.s2d.as_ref().expect("clap requires --s2d with --d2s");
        (read_task_examples(d2s_path)?, read_task_examples(s2d_path)?)
    };

    let mixed = match interleave(&d2s_stream, &s2d_stream) {
        Ok(mixed) => mixed,
        Err(err) => {
            eprintln!("interleave examples=0 status=failures");
            eprintln!("error: {err}");
            return Ok(1);
        }
    };

    let final_stream = match (&args.synthetic, args.seed) {
        (Some(path), Some(seed)) => {
            let synthetic = read_task_examples(path)?;
            match inject_synthetic(&mixed, &synthetic, seed) {
                Ok(stream) => stream,
                Err(err) => {
                    eprintln!("interleave examples=0 status=failures");
                    eprintln!("error: {err}");
                    return Ok(1);
                }
            }
        }
        _ => mixed,
    };

    let mut out = open_out(args.out.as_ref())?;
    write_task_examples(&mut out, &final_stream).map_err(werr)?;
    out.flush().map_err(werr)?;
    eprintln!("interleave examples={} status=ok", final_stream.len());
    Ok(0)
}

// ---------------------------------------------------------- ingest-synthetic

fn run_ingest(args: IngestArgs) -> Result<i32, CliError> {
    let envelopes: Vec<SyntheticEnvelope> = read_jsonl(&args.input, |_, line| {
        serde_json::from_str(line).map_err(|e| e.to_string())
    })?;
    let (records, report) = ingest_synthetic(&envelopes, args.start_id);

    let mut out = open_out(args.out.as_ref())?;
    for record in &records {
        let json = RecordJson::from_record(record);
        serde_json::to_writer(&mut out, &json).map_err(jerr)?;
        writeln!(out).map_err(werr)?;
    }
    out.flush().map_err(werr)?;

    if let Some(path) = &args.report {
        let file = File::create(path).map_err(|e| io_err(path, e))?;
        serde_json::to_writer_pretty(BufWriter::new(file), &report)
            .map_err(|e| io_err(path, e.into()))?;
    }

    let rejected = report.content_filtered + report.malformed;
    eprintln!(
        "ingest-synthetic requested={} content_filtered={} malformed={} accepted={} status={}",
        report.requested,
        report.content_filtered,
        report.malformed,
        report.accepted,
        if rejected == 0 { "ok" } else { "failures" }
    );
    Ok(exit_for(rejected, args.lenient))
}

// ---------------------------------------------------------------- score

#[derive(Deserialize)]
struct PredLine {
    record_id: u64,
    output: String,
}

#[derive(Serialize)]
struct ScoreRow {
    record_id: u64,
    task: &'static str,
    f1: Option<f64>,
    tp: Option<usize>,
    fp: Option<usize>,
    #[serde(rename = "fn")]
    fn_: Option<usize>,
    edit_total: Option<usize>,
    bleu4: Option<f64>,
    rouge_l: Option<f64>,
}

const SCORE_HEADER: [&str; 9] = [
    "record_id",
    "task",
    "f1",
    "tp",
    "fp",
    "fn",
    "edit_total",
    "bleu4",
    "rouge_l",
];

/// Scores one prediction. The boolean reports whether a sentence-to-data
/// output failed to parse; such outputs score as an empty triple set rather
/// than aborting the run, and the count is surfaced in the summary.
fn score_one(task: TaskArg, pred: &PredLine, gold: &Record) -> (ScoreRow, bool) {
    match task {
        TaskArg::S2d => {
            let (set, parse_failed) = match parse_triples(strip_task_prefix(&pred.output).1) {
                Ok(set) => (set, false),
                Err(_) => (TripleSet::new(Vec::new()), true),
            };
            let breakdown =
                set_f1(&set, gold.triples()).expect("gold records always carry triples");
            let edit =
                align_and_edit(&set, gold.triples()).expect("gold records always carry triples");
            (
                ScoreRow {
                    record_id: pred.record_id,
                    task: "s2d",
                    f1: Some(breakdown.f1),
                    tp: Some(breakdown.true_positives),
                    fp: Some(breakdown.false_positives),
                    fn_: Some(breakdown.false_negatives),
                    edit_total: Some(edit.total),
                    bleu4: None,
                    rouge_l: None,
                },
                parse_failed,
            )
        }
        TaskArg::D2s => {
            let refs = gold.references();
            let bleu = bleu4(&pred.output, refs).expect("gold records always carry references");
            let rouge = rouge_l(&pred.output, refs).expect("gold records always carry references");
            (
                ScoreRow {
                    record_id: pred.record_id,
                    task: "d2s",
                    f1: None,
                    tp: None,
                    fp: None,
                    fn_: None,
                    edit_total: None,
                    bleu4: Some(bleu),
                    rouge_l: Some(rouge),
                },
                false,
            )
        }
    }
}

fn run_score(args: ScoreArgs) -> Result<i32, CliError> {
    let preds: Vec<PredLine> = read_jsonl(&args.pred, |_, line| {
        serde_json::from_str(line).map_err(|e| e.to_string())
    })?;
    let corpus = load_corpus(&args.gold, None)?;
    let by_id: HashMap<u64, &Record> = corpus.records().iter().map(|r| (r.id(), r)).collect();

    let pool = thread_pool(args.jobs);
    let task = args.task;
    let results: Vec<Option<(ScoreRow, bool)>> = pool.install(|| {
        use rayon::prelude::*;
        preds
            .par_iter()
            .map(|pred| {
                by_id
                    .get(&pred.record_id)
                    .map(|gold| score_one(task, pred, gold))
            })
            .collect()
    });

    let mut rows = Vec::new();
    let mut parse_failures = 0usize;
    let mut missing_gold = 0usize;
    for (pred, result) in preds.iter().zip(results) {
        match result {
            Some((row, failed)) => {
                parse_failures += usize::from(failed);
                rows.push(row);
            }
            None => {
                missing_gold += 1;
                eprintln!("record {}: no gold record with this id", pred.record_id);
            }
        }
    }
    rows.sort_by_key(|row| row.record_id);

    let out_writer = open_out(args.out.as_ref())?;
    let mut writer = csv::Writer::from_writer(out_writer);
    if rows.is_empty() {
        writer.write_record(SCORE_HEADER)?;
    }
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(werr)?;

    let n = rows.len();
    let mean = |f: &dyn Fn(&ScoreRow) -> Option<f64>| -> Option<f64> {
        let values: Vec<f64> = rows.iter().filter_map(f).collect();
        if values.is_empty() {
            None
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    };
    let summary = serde_json::json!({
        "records": n,
        "task": args.task.name(),
        "mean_f1": mean(&|r| r.f1),
        "zero_f1_records": rows.iter().filter(|r| r.f1 == Some(0.0)).count(),
        "mean_edit_total": mean(&|r| r.edit_total.map(|v| v as f64)),
        "mean_bleu4": mean(&|r| r.bleu4),
        "mean_rouge_l": mean(&|r| r.rouge_l),
        "parse_failures": parse_failures,
        "missing_gold": missing_gold,
    });
    if let Some(path) = &args.summary_out {
        let file = File::create(path).map_err(|e| io_err(path, e))?;
        serde_json::to_writer_pretty(BufWriter::new(file), &summary)
            .map_err(|e| io_err(path, e.into()))?;
    }
    eprintln!(
        "score records={n} parse_failures={parse_failures} missing_gold={missing_gold} status={}",
        if missing_gold == 0 { "ok" } else { "failures" }
    );
    Ok(exit_for(missing_gold, args.lenient))
}

// ---------------------------------------------------------------- diagnose

fn run_diagnose(args: DiagnoseArgs) -> Result<i32, CliError> {
    let settings = config::load_from_env()?;
    let preds: Vec<PredLine> = read_jsonl(&args.pred, |_, line| {
        serde_json::from_str(line).map_err(|e| e.to_string())
    })?;
    let mut out = open_out(args.out.as_ref())?;
    let mut findings = 0usize;

    match args.mode {
        DiagnoseMode::Mismatch => {
            let gold_path = args.gold.as_ref().ok_or(CliError::MissingGold)?;
            let corpus = load_corpus(gold_path, None)?;
            let by_id: HashMap<u64, &Record> =
                corpus.records().iter().map(|r| (r.id(), r)).collect();
            let mut parse_failures = 0usize;
            for pred in &preds {
                let Some(gold) = by_id.get(&pred.record_id) else {
                    findings += 1;
                    eprintln!("record {}: no gold record with this id", pred.record_id);
                    continue;
                };
                let set = match parse_triples(strip_task_prefix(&pred.output).1) {
                    Ok(set) => set,
                    Err(err) => {
                        parse_failures += 1;
                        findings += 1;
                        eprintln!("record {}: {err}", pred.record_id);
                        continue;
                    }
                };
                for label in classify_mismatches_in(&set, gold.triples(), &settings.units) {
                    findings += 1;
                    let row = serde_json::json!({
                        "record_id": pred.record_id,
                        "kind": label.kind,
                        "pred": label.pred.canonical_key(),
                        "gold": label.gold.as_ref().map(|t| t.canonical_key()),
                    });
                    serde_json::to_writer(&mut out, &row).map_err(jerr)?;
                    writeln!(out).map_err(werr)?;
                }
            }
            out.flush().map_err(werr)?;
            eprintln!(
                "diagnose mode=mismatch records={} findings={findings} parse_failures={parse_failures} status={}",
                preds.len(),
                if findings == 0 { "ok" } else { "failures" }
            );
        }
        DiagnoseMode::Repetition => {
            for pred in &preds {
                let tokens: Vec<&str> = pred.output.split_whitespace().collect();
                if tokens.is_empty() {
                    continue;
                }
                let flag = detect_repetition(&tokens, &settings.repetition)
                    .expect("non-empty token list");
                if flag.flagged {
                    findings += 1;
                    let row = serde_json::json!({
                        "record_id": pred.record_id,
                        "kind": "repetition_loop",
                        "period": flag.period,
                        "repeats": flag.repeats,
                        "start_index": flag.start_index,
                    });
                    serde_json::to_writer(&mut out, &row).map_err(jerr)?;
                    writeln!(out).map_err(werr)?;
                }
            }
            out.flush().map_err(werr)?;
            eprintln!(
                "diagnose mode=repetition records={} findings={findings} status={}",
                preds.len(),
                if findings == 0 { "ok" } else { "failures" }
            );
        }
    }
    Ok(exit_for(findings, args.lenient))
}
