//! `dslkit` command-line interface.
//!
//! Exit codes: 0 on success, 2 for usage or input errors, 1 for anything else.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dslkit::evaluation::CurveSize;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "dslkit",
    version,
    about = "Similar-language discrimination toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a classifier on DSLCC-format corpora.
    Train(TrainArgs),
    /// Label texts with a trained model, one label (or top-k labels) per line.
    Predict(PredictArgs),
    /// Score a run file against gold labels.
    Eval(EvalArgs),
    /// Fuse many run files with a voting combiner.
    Ensemble(EnsembleArgs),
    /// Learning curve over balanced training-set sizes.
    Curve(CurveArgs),
    /// Per-instance and per-annotator statistics of manual annotations.
    Annot(AnnotArgs),
    /// Write a synthetic corpus.
    GenSynth(GenSynthArgs),
    /// Keep selected language groups and normalise placeholder tokens.
    Filter(FilterArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    Counts,
    Tfidf,
}

#[derive(Debug, Clone, Args)]
pub struct FeatureArgs {
    /// Character n-gram orders (comma separated). Defaults to 6 when no word order is given.
    #[arg(long = "char-n", value_delimiter = ',')]
    pub char_n: Vec<usize>,
    /// Word n-gram orders (comma separated).
    #[arg(long = "word-n", value_delimiter = ',')]
    pub word_n: Vec<usize>,
    #[arg(long)]
    pub lowercase: bool,
    /// Minimum document frequency for a feature to enter the vocabulary.
    #[arg(long = "min-df", default_value_t = 1)]
    pub min_df: usize,
    #[arg(long, value_enum, default_value_t = WeightingArg::Counts)]
    pub weighting: WeightingArg,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Base learner: `nb` or `linear`.
    #[arg(long, default_value = "nb")]
    pub model: String,
    /// Group stage first, then one model per group.
    #[arg(long)]
    pub hierarchical: bool,
    /// Naive Bayes smoothing.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Perceptron epochs.
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[command(flatten)]
    pub features: FeatureArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    /// Label space JSON (`{"labels":[{"code":..,"group":..}]}`). Without it,
    /// labels are collected from the data into group `X`.
    #[arg(long = "label-space")]
    pub label_space: Option<PathBuf>,
    /// Reject labels missing from the label space instead of adding them to group `X`.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training corpora; several files are concatenated.
    #[arg(long = "corpus", required = true)]
    pub corpus: Vec<PathBuf>,
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// One text per line; a trailing `<TAB>label` is ignored.
    #[arg(long)]
    pub input: PathBuf,
    /// Emit the k best labels per line, tab separated.
    #[arg(long = "top-k", default_value_t = 1)]
    pub top_k: usize,
    /// Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Run file, one label per line.
    #[arg(long)]
    pub pred: PathBuf,
    /// Gold labels, one per line or DSLCC `text<TAB>label`.
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long = "label-space")]
    pub label_space: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Directory of run files (every regular, non-hidden file except the gold file).
    #[arg(long = "run-dir", required_unless_present = "runs")]
    pub run_dir: Option<PathBuf>,
    /// Individual run files, in addition to `--run-dir`.
    #[arg(long = "runs", value_delimiter = ',')]
    pub runs: Vec<PathBuf>,
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long = "label-space")]
    pub label_space: Option<PathBuf>,
    /// plurality, majority, oracle, accuracy-at-n, random, or `all`.
    #[arg(long, default_value = "all")]
    pub combiner: String,
    /// Candidate list length for accuracy-at-n.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long = "train", required = true)]
    pub train: Vec<PathBuf>,
    #[arg(long)]
    pub test: PathBuf,
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Instances per label (comma separated); `full` uses the whole training set once.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<CurveSize>,
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Parallel training jobs; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnnotArgs {
    /// Annotation tables, one JSON file per group.
    #[arg(long = "table", required = true)]
    pub table: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenSynthArgs {
    #[arg(long, default_value_t = 4)]
    pub labels: usize,
    #[arg(long = "per-label", default_value_t = 1200)]
    pub per_label: usize,
    #[arg(long, default_value_t = 26)]
    pub alphabet: usize,
    /// 1 gives disjoint per-label alphabets; smaller values mix labels.
    #[arg(long, default_value_t = 0.5)]
    pub skew: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Corpus output (DSLCC format).
    #[arg(long)]
    pub out: PathBuf,
    /// Where to write the generated label space.
    #[arg(long = "label-space-out")]
    pub label_space_out: Option<PathBuf>,
    /// Also write a per-label train/test split: the first N instances of
    /// each label go to `<out>.train`, the rest to `<out>.test`.
    #[arg(long = "split-train")]
    pub split_train: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Groups to keep (comma separated); all groups when omitted.
    #[arg(long, value_delimiter = ',')]
    pub groups: Vec<String>,
    /// Collapse runs of this placeholder token into `--canonical`.
    #[arg(long)]
    pub placeholder: Option<String>,
    #[arg(long, default_value = dslkit::corpus::CANONICAL_PLACEHOLDER)]
    pub canonical: String,
    #[arg(long)]
    pub out: PathBuf,
}

/// Input problem detected by the CLI itself.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn exit_code(err: &anyhow::Error) -> u8 {
    let input = err
        .chain()
        .any(|e| e.is::<dslkit::Error>() || e.is::<UsageError>());
    if input {
        2
    } else {
        1
    }
}

/// Error chain joined with `: `, skipping causes the previous message already
/// spells out.
fn describe(err: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in err.chain() {
        let msg = cause.to_string();
        if !out.ends_with(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(|| match cli.command {
        Command::Train(a) => commands::train(a),
        Command::Predict(a) => commands::predict(a),
        Command::Eval(a) => commands::eval(a),
        Command::Ensemble(a) => commands::ensemble(a),
        Command::Curve(a) => commands::curve(a),
        Command::Annot(a) => commands::annot(a),
        Command::GenSynth(a) => commands::gen_synth(a),
        Command::Filter(a) => commands::filter(a),
    });
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            eprintln!("error: {}", describe(&err));
            ExitCode::from(exit_code(&err))
        }
        Err(_) => ExitCode::from(1),
    }
}
