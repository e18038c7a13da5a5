//! Command-line front end. Every subcommand reads its inputs, calls one
//! library operation and prints the result either as a text table or as the
//! JSON object the HTTP API would return.

use std::collections::{BTreeSet, HashMap};
use std::ffi::OsString;
use std::io::{IsTerminal, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::agreement::{agreement_report, ReportConfig, SamplerConfig, Target};
use crate::analytics::{classification_report, corpus_stats, split_corpus, SplitRatios};
use crate::corpus::{parse_corpus, serialize_corpus, slice, AnnotatedCorpus};
use crate::error::{Error, Result};
use crate::scorer::{Language, RubricConfig};
use crate::segmenter::{Segment, SegmenterConfig};
use crate::service::{self, Analyzer, ScorerMode, ServiceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "empathy", version, about = "Empathy-annotated peer-review workbench")]
pub struct Cli {
    /// Output format; defaults to `table` on a terminal and `machine` otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a corpus file.
    Validate {
        corpus: PathBuf,
        /// Reject unknown keys.
        #[arg(long)]
        strict: bool,
    },
    /// Descriptive corpus statistics.
    Stats {
        corpus: PathBuf,
        #[arg(long)]
        strict: bool,
    },
    /// Inter-annotator agreement report.
    Iaa {
        corpus: PathBuf,
        /// Restrict the report; repeatable. All targets by default.
        #[arg(long, value_enum)]
        target: Vec<TargetArg>,
        /// Include unitized alpha for component spans.
        #[arg(long)]
        alpha_u: bool,
        /// Seed of the unitized-alpha sampler.
        #[arg(long, default_value_t = SamplerConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SamplerConfig::default().rounds)]
        rounds: usize,
        #[arg(long)]
        strict: bool,
    },
    /// Confusion probability matrix for one target.
    Cpm {
        corpus: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long)]
        strict: bool,
    },
    /// Segment, score and give feedback on a review (file or `-` for stdin).
    Score {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value = "de")]
        lang: Language,
        /// Rubric config replacing the built-in rubric of its language.
        #[arg(long)]
        rubric_config: Option<PathBuf>,
    },
    /// Detect strengths, weaknesses and suggestions in a review.
    Segment {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        segmenter_config: Option<PathBuf>,
    },
    /// Classification report from gold and predicted label lists.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Label alphabet; defaults to every label seen in either file.
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
    },
    /// Seeded train/validation/test split written as three corpus files.
    Split {
        corpus: PathBuf,
        #[arg(long, default_value_t = 0.7)]
        train: f64,
        #[arg(long, default_value_t = 0.2)]
        val: f64,
        #[arg(long, default_value_t = 0.1)]
        test: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        strict: bool,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, env = "EMPATHY_PORT", default_value_t = service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, env = "EMPATHY_SCORER", value_enum, default_value = "rubric")]
        scorer: ScorerArg,
        #[arg(long, env = "EMPATHY_REMOTE_ENDPOINT")]
        remote_endpoint: Option<String>,
        #[arg(long, env = "EMPATHY_REMOTE_TIMEOUT_MS", default_value_t = service::DEFAULT_TIMEOUT_MS)]
        remote_timeout_ms: u64,
        /// Repeatable; each file replaces the rubric of its language.
        #[arg(long)]
        rubric_config: Vec<PathBuf>,
        #[arg(long, env = "EMPATHY_SEGMENTER_CONFIG")]
        segmenter_config: Option<PathBuf>,
        #[arg(long)]
        templates_de: Option<PathBuf>,
        #[arg(long)]
        templates_en: Option<PathBuf>,
        #[arg(long, env = "EMPATHY_SURVEY_STORE", default_value = "survey.jsonl")]
        survey_store: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Components,
    Cognitive,
    Emotional,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Target {
        match t {
            TargetArg::Components => Target::Components,
            TargetArg::Cognitive => Target::Cognitive,
            TargetArg::Emotional => Target::Emotional,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScorerArg {
    Rubric,
    Remote,
}

/// Corpus summary printed by `validate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub valid: bool,
    pub documents: usize,
    pub annotations: usize,
    pub annotators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub seed: u64,
    pub train: usize,
    pub val: usize,
    pub test: usize,
    pub files: Vec<PathBuf>,
}

/// Gold or predicted labels: one entry per item, either a label or a set.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum LabelEntry {
    One(String),
    Many(BTreeSet<String>),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Streams and terminal detection for one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    pub terminal: bool,
}

/// Runs with the process streams.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let terminal = stdout.is_terminal();
    let mut io = Io {
        stdin: &mut std::io::stdin(),
        stdout: &mut stdout.lock(),
        stderr: &mut std::io::stderr(),
        terminal,
    };
    run(args, &mut io)
}

pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { io.stderr } else { io.stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let format = cli.format.unwrap_or(if io.terminal { Format::Table } else { Format::Machine });
    match execute(cli.command, format, io) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String> {
    let bytes = if path == Path::new("-") {
        let mut buf = Vec::new();
        stdin.read_to_end(&mut buf).map_err(|e| Error::io("<stdin>", e))?;
        buf
    } else {
        read_file(path)?
    };
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(format!("{}: not UTF-8: {e}", path.display())))
}

fn load_corpus(path: &Path, strict: bool) -> Result<AnnotatedCorpus> {
    parse_corpus(&read_file(path)?, strict).map_err(|e| match e {
        Error::Io { .. } => e,
        other => Error::InvalidInput(format!("{}: {other}", path.display())),
    })
}

fn emit<T: Serialize>(io: &mut Io<'_>, format: Format, value: &T, table: impl FnOnce(&T) -> String) -> Result<()> {
    let out = match format {
        Format::Table => table(value),
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
    };
    io.stdout.write_all(out.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

fn read_labels(path: &Path) -> Result<Vec<BTreeSet<String>>> {
    let entries: Vec<LabelEntry> = serde_json::from_slice(&read_file(path)?)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    Ok(entries
        .into_iter()
        .map(|e| match e {
            LabelEntry::One(l) => BTreeSet::from([l]),
            LabelEntry::Many(s) => s,
        })
        .collect())
}

fn segments_table(text: &str, segments: &[Segment]) -> String {
    segments
        .iter()
        .map(|s| format!("{:<10} [{}, {}) {}\n", s.label.as_str(), s.span.start, s.span.end, slice(text, s.span)))
        .collect()
}

fn execute(command: Command, format: Format, io: &mut Io<'_>) -> Result<()> {
    match command {
        Command::Validate { corpus, strict } => {
            let c = load_corpus(&corpus, strict)?;
            let summary = ValidationSummary {
                valid: true,
                documents: c.documents.len(),
                annotations: c.annotation_count(),
                annotators: c.annotators().into_iter().map(String::from).collect(),
            };
            emit(io, format, &summary, |s| {
                format!(
                    "ok: {} documents, {} annotations, annotators: {}\n",
                    s.documents,
                    s.annotations,
                    s.annotators.join(", ")
                )
            })
        }
        Command::Stats { corpus, strict } => {
            let report = corpus_stats(&load_corpus(&corpus, strict)?)?;
            emit(io, format, &report, |r| r.to_table())
        }
        Command::Iaa { corpus, target, alpha_u, seed, rounds, strict } => {
            let targets = if target.is_empty() { Target::ALL.to_vec() } else { target.into_iter().map(Target::from).collect() };
            let config = ReportConfig { targets, alpha_u, sampler: SamplerConfig { rounds, seed } };
            let report = agreement_report(&load_corpus(&corpus, strict)?, &config)?;
            emit(io, format, &report, |r| r.to_table())
        }
        Command::Cpm { corpus, target, strict } => {
            let config = ReportConfig { targets: vec![target.into()], alpha_u: false, ..ReportConfig::default() };
            let report = agreement_report(&load_corpus(&corpus, strict)?, &config)?;
            let cpm = match target {
                TargetArg::Components => report.components.map(|c| c.cpm),
                _ => report.scales.into_iter().next().and_then(|s| s.cpm),
            }
            .ok_or_else(|| Error::Undefined("no items for the requested target".into()))?;
            emit(io, format, &cpm, |m| m.to_table())
        }
        Command::Score { input, lang, rubric_config } => {
            let text = read_input(&input, io.stdin)?;
            let rubrics = match rubric_config {
                Some(p) => vec![RubricConfig::from_json(&read_file(&p)?)?],
                None => Vec::new(),
            };
            let analyzer = Analyzer::new(&SegmenterConfig::default(), rubrics, HashMap::new())?;
            let response = analyzer.analyze(&text, lang)?;
            emit(io, format, &response, |r| r.report.to_table(&text))
        }
        Command::Segment { input, segmenter_config } => {
            let text = read_input(&input, io.stdin)?;
            let config = match segmenter_config {
                Some(p) => SegmenterConfig::from_json(&read_file(&p)?)?,
                None => SegmenterConfig::default(),
            };
            let segments = crate::segmenter::segment_review(&text, &config)?;
            emit(io, format, &segments, |s| segments_table(&text, s.as_slice()))
        }
        Command::Eval { gold, pred, labels } => {
            let gold = read_labels(&gold)?;
            let pred = read_labels(&pred)?;
            let labels: Vec<String> = if labels.is_empty() {
                gold.iter().chain(&pred).flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect()
            } else {
                labels
            };
            let report = classification_report(&gold, &pred, &labels)?;
            emit(io, format, &report, |r| r.to_table())
        }
        Command::Split { corpus, train, val, test, seed, out, strict } => {
            let c = load_corpus(&corpus, strict)?;
            let split = split_corpus(&c, SplitRatios { train, val, test }, seed)?;
            std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            let mut files = Vec::new();
            for (name, part) in [("train", &split.train), ("val", &split.val), ("test", &split.test)] {
                let path = out.join(format!("{name}.json"));
                std::fs::write(&path, serialize_corpus(part)).map_err(|e| Error::io(&path, e))?;
                files.push(path);
            }
            let summary = SplitSummary {
                seed,
                train: split.train.documents.len(),
                val: split.val.documents.len(),
                test: split.test.documents.len(),
                files,
            };
            emit(io, format, &summary, |s| {
                format!("train {}  val {}  test {}  (seed {})\n", s.train, s.val, s.test, s.seed)
            })
        }
        Command::Serve {
            port,
            scorer,
            remote_endpoint,
            remote_timeout_ms,
            rubric_config,
            segmenter_config,
            templates_de,
            templates_en,
            survey_store,
        } => {
            let mut templates = HashMap::new();
            templates_de.map(|p| templates.insert(Language::De, p));
            templates_en.map(|p| templates.insert(Language::En, p));
            let config = ServiceConfig {
                port,
                scorer_mode: match scorer {
                    ScorerArg::Rubric => ScorerMode::Rubric,
                    ScorerArg::Remote => ScorerMode::Remote,
                },
                remote_endpoint,
                remote_timeout_ms,
                rubric_configs: rubric_config,
                segmenter_config,
                templates,
                survey_store,
            };
            let _ = writeln!(io.stderr, "listening on 0.0.0.0:{port}");
            tokio::runtime::Runtime::new()
                .map_err(|e| Error::io("<runtime>", e))?
                .block_on(service::serve(&config))
        }
    }
}
