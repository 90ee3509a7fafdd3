//! Command-line front end for the note-stream toolkit: validation,
//! repair, format conversion, audio rendering, prompt extraction, and
//! the train/generate/evaluate loop.
//!
//! Exit codes: 0 success, 1 validation failure, 2 I/O or format
//! error, 3 usage error. Payloads go to standard output or `--out`;
//! everything else goes to standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ynote::audio::{render_wav, RenderConfig};
use ynote::interop::abc::abc_import;
use ynote::interop::midi::{midi_export, midi_import};
use ynote::interop::musicxml::musicxml_import;
use ynote::markov::{GenerateError, MarkovModel, TrainError};
use ynote::metrics::{bleu_ngram_precision, rouge_n, tokenize, RougeScore};
use ynote::normalize::normalize;
use ynote::prompt;
use ynote::report::{render_table, to_jsonl, EvalRecord};
use ynote::score::Score;
use ynote::text::{parse_stream, serialize, Diagnostic};

#[derive(Parser)]
#[command(name = "ynote", version, about = "Tools for the four-character note stream format")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strictly check a stream, listing every problem
    Validate { path: PathBuf },
    /// Convert between stream text, MIDI, ABC, MusicXML, and WAV
    Convert {
        #[arg(long, value_enum)]
        from: InputFormat,
        #[arg(long, value_enum)]
        to: OutputFormat,
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repair a stream and report how much changed
    Normalize {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the edit-by-edit repair listing to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Extract a generation prompt from a piece
    Prompt {
        #[arg(long, value_enum)]
        mode: Mode,
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train a Markov model on every .ynote file in a directory
    Train {
        corpus: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Continue a prompt with a trained model
    Generate {
        model: PathBuf,
        prompt: PathBuf,
        /// Total notes to produce, prompt included
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score candidate pieces against references and print the table
    Evaluate {
        #[arg(required = true)]
        candidates: Vec<PathBuf>,
        #[arg(long = "reference", required = true)]
        references: Vec<PathBuf>,
        /// Write one JSON record per candidate to this file
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Ynote,
    Midi,
    Abc,
    Musicxml,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Ynote,
    Midi,
    Wav,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    FirstBar,
    BarEndpoints,
}

impl From<Mode> for prompt::PromptMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::FirstBar => prompt::PromptMode::FirstBar,
            Mode::BarEndpoints => prompt::PromptMode::BarEndpoints,
        }
    }
}

/// A command failure, carrying its exit code.
enum Failure {
    Validation(String),
    Format(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Format(_) => 2,
            Failure::Usage(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Format(m) | Failure::Usage(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 3 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Convert { from, to, path, out } => cmd_convert(from, to, &path, out.as_deref()),
        Command::Normalize { path, out, report } => {
            cmd_normalize(&path, out.as_deref(), report.as_deref())
        }
        Command::Prompt { mode, path, out } => cmd_prompt(mode, &path, out.as_deref()),
        Command::Train { corpus, order, out } => cmd_train(&corpus, order, out.as_deref()),
        Command::Generate { model, prompt, length, seed, out } => {
            cmd_generate(&model, &prompt, length, seed, out.as_deref())
        }
        Command::Evaluate { candidates, references, records, out } => {
            cmd_evaluate(&candidates, &references, records.as_deref(), out.as_deref())
        }
    }
}

fn cmd_validate(path: &Path) -> Result<(), Failure> {
    let text = read_text(path)?;
    match parse_stream(&text) {
        Ok(_) => Ok(()),
        Err(diagnostics) => {
            for diagnostic in &diagnostics {
                eprintln!("{diagnostic}");
            }
            Err(Failure::Validation(format!(
                "{} problem(s) in {}",
                diagnostics.len(),
                path.display()
            )))
        }
    }
}

fn cmd_convert(
    from: InputFormat,
    to: OutputFormat,
    path: &Path,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let score = match from {
        InputFormat::Ynote => parse_strict(path, &read_text(path)?)?,
        InputFormat::Midi => {
            let bytes = read_bytes(path)?;
            let (score, report) =
                midi_import(&bytes).map_err(|e| Failure::Format(format!("{}: {e}", e.name())))?;
            eprintln!("{}", report.summary());
            score
        }
        InputFormat::Abc => {
            let text = read_text(path)?;
            let (score, report) =
                abc_import(&text).map_err(|e| Failure::Format(format!("{}: {e}", e.name())))?;
            eprintln!("{}", report.summary());
            score
        }
        InputFormat::Musicxml => {
            let text = read_text(path)?;
            let (score, report) = musicxml_import(&text)
                .map_err(|e| Failure::Format(format!("{}: {e}", e.name())))?;
            eprintln!("{}", report.summary());
            score
        }
    };
    match to {
        OutputFormat::Ynote => write_payload(out, serialize(&score).as_bytes()),
        OutputFormat::Midi => {
            let bytes = midi_export(&score).map_err(|e| Failure::Format(e.to_string()))?;
            write_payload(out, &bytes)
        }
        OutputFormat::Wav => {
            let bytes = render_wav(&score, &RenderConfig::default())
                .map_err(|e| Failure::Format(e.to_string()))?;
            write_payload(out, &bytes)
        }
    }
}

fn cmd_normalize(path: &Path, out: Option<&Path>, report: Option<&Path>) -> Result<(), Failure> {
    let text = read_text(path)?;
    let (repaired, repair) = normalize(&text);
    eprintln!("{}", repair.summary());
    if let Some(report_path) = report {
        let mut listing = repair.summary();
        listing.push('\n');
        for edit in &repair.edits {
            listing.push_str(&format!("{edit}\n"));
        }
        write_file(report_path, listing.as_bytes())?;
    }
    write_payload(out, repaired.as_bytes())
}

fn cmd_prompt(mode: Mode, path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let score = parse_strict(path, &read_text(path)?)?;
    let prompt = prompt::extract(&score, mode.into())
        .map_err(|e| Failure::Validation(e.to_string()))?;
    write_payload(out, prompt.to_text().as_bytes())
}

fn cmd_train(corpus_dir: &Path, order: usize, out: Option<&Path>) -> Result<(), Failure> {
    if order == 0 {
        return Err(Failure::Usage("--order must be at least 1".into()));
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(corpus_dir)
        .map_err(|e| Failure::Format(format!("cannot read {}: {e}", corpus_dir.display())))?
        .filter_map(|entry| entry.ok())
        .map(|entry| entry.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "ynote"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::Format(format!(
            "no .ynote files in {}",
            corpus_dir.display()
        )));
    }

    let mut corpus = Vec::with_capacity(paths.len());
    for path in &paths {
        corpus.push(parse_strict(path, &read_text(path)?)?.notes);
    }
    let model = MarkovModel::train(&corpus, order).map_err(|e| match e {
        TrainError::SequenceTooShort { index, len, order } => Failure::Validation(format!(
            "{} has {len} note(s); an order-{order} model needs more than {order}",
            paths[index].display()
        )),
        TrainError::EmptyCorpus => Failure::Validation(e.to_string()),
    })?;
    eprintln!(
        "trained an order-{order} model on {} piece(s): {} contexts, {} distinct tokens",
        corpus.len(),
        model.context_count(),
        model.vocabulary().len()
    );
    write_payload(out, model.to_text().as_bytes())
}

fn cmd_generate(
    model_path: &Path,
    prompt_path: &Path,
    length: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let model = MarkovModel::from_text(&read_text(model_path)?)
        .map_err(|e| Failure::Format(format!("{}: {e}", model_path.display())))?;
    let prompt = parse_strict(prompt_path, &read_text(prompt_path)?)?;
    let notes = model.generate(&prompt.notes, length, seed).map_err(|e| match e {
        GenerateError::TargetShorterThanPrompt { .. } => Failure::Usage(e.to_string()),
        GenerateError::EmptyModel => Failure::Format(e.to_string()),
    })?;
    let (clean, repair) = normalize(&serialize(&Score::new(notes)));
    eprintln!("{}", repair.summary());
    write_payload(out, clean.as_bytes())
}

fn cmd_evaluate(
    candidates: &[PathBuf],
    references: &[PathBuf],
    records_path: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let mut reference_tokens = Vec::with_capacity(references.len());
    for path in references {
        let text = read_text(path)?;
        reference_tokens
            .push(tokenize(&text).map_err(|d| report_diagnostics(path, &d))?);
    }

    let mut records = Vec::with_capacity(candidates.len());
    for (index, path) in candidates.iter().enumerate() {
        let sample = format!("Sample {}", index + 1);
        let (clean, repair) = normalize(&read_text(path)?);
        eprintln!("{sample}: {}: {}", path.display(), repair.summary());
        let tokens = tokenize(&clean).expect("normalized streams always parse");
        let bleu =
            [1, 2, 3, 4].map(|n| bleu_ngram_precision(&tokens, &reference_tokens, n));
        records.push(EvalRecord {
            sample,
            bleu,
            rouge_1: best_rouge(&tokens, &reference_tokens, 1),
            rouge_2: best_rouge(&tokens, &reference_tokens, 2),
            repair_ratio: repair.ratio(),
        });
    }

    if let Some(path) = records_path {
        write_file(path, to_jsonl(&records).as_bytes())?;
    }
    write_payload(out, render_table(&records).as_bytes())
}

/// Best score over the references, by F1; ties keep the earlier one.
fn best_rouge(candidate: &[String], references: &[Vec<String>], n: usize) -> RougeScore {
    let mut best = RougeScore { precision: 0.0, recall: 0.0, f1: 0.0 };
    for reference in references {
        let score = rouge_n(candidate, reference, n);
        if score.f1 > best.f1 {
            best = score;
        }
    }
    best
}

fn parse_strict(path: &Path, text: &str) -> Result<Score, Failure> {
    parse_stream(text).map_err(|diagnostics| report_diagnostics(path, &diagnostics))
}

fn report_diagnostics(path: &Path, diagnostics: &[Diagnostic]) -> Failure {
    for diagnostic in diagnostics {
        eprintln!("{}: {diagnostic}", path.display());
    }
    Failure::Validation(format!("{} problem(s) in {}", diagnostics.len(), path.display()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Format(format!("cannot read {}: {e}", path.display())))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Format(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes)
        .map_err(|e| Failure::Format(format!("cannot write {}: {e}", path.display())))
}

fn write_payload(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Format(format!("cannot write to standard output: {e}"))),
    }
}
