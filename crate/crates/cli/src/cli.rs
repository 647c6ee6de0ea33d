//! Command-line interface definition.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "varuq",
    version,
    about = "Uncertainty measures over second-order distributions: scoring, axiom checks, and desk-scale experiments"
)]
pub struct Cli {
    /// Seed for every stochastic component of the run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Directory for output artifacts and the run manifest (default: .).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// JSON config file; command-line flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Score a prediction file with the chosen measures.
    Measure(MeasureArgs),
    /// Reference table of both measure families over six second-order
    /// distributions of a Bernoulli parameter.
    Figure1(Figure1Args),
    /// Run the axiom verdict suite.
    Axioms(AxiomsArgs),
    /// Accuracy-rejection curve from a prediction file.
    Arc(ArcArgs),
    /// Out-of-distribution AUROC from in- and out-of-distribution files.
    Ood(OodArgs),
    /// Correct/incorrect score histograms from a prediction file.
    Hist(HistArgs),
    /// Generate a synthetic ensemble dataset (train/test/ood files).
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    /// Prediction file to score.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// File format (csv or jsonl); inferred from the extension if omitted.
    #[arg(long)]
    pub format: Option<String>,
    /// Comma-separated measure ids among tu_ent, au_ent, eu_ent, tu_var,
    /// au_var, eu_var (default: all six).
    #[arg(long)]
    pub measures: Option<String>,
    /// Comma-separated per-label importance weights (variance family).
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Args, Debug)]
pub struct Figure1Args {
    /// Atoms per sampled panel.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
pub struct AxiomsArgs {
    /// Measure family: variance, entropy, or both.
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated axiom ids among A0, A1, A3, A4, A5, A6, A7
    /// (default: all seven).
    #[arg(long)]
    pub axioms: Option<String>,
    /// Seeded cases per axiom and family.
    #[arg(long)]
    pub cases: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ArcArgs {
    /// Prediction file.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// File format (csv or jsonl); inferred from the extension if omitted.
    #[arg(long)]
    pub format: Option<String>,
    /// Measure id to rank instances by.
    #[arg(long)]
    pub measure: Option<String>,
    /// Comma-separated per-label importance weights (variance family).
    #[arg(long)]
    pub weights: Option<String>,
    /// Rejection grid start:stop:step, e.g. 0:0.99:0.01.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Args, Debug)]
pub struct OodArgs {
    /// In-distribution prediction file.
    #[arg(long)]
    pub id: Option<PathBuf>,
    /// Out-of-distribution prediction file.
    #[arg(long)]
    pub ood: Option<PathBuf>,
    /// File format for both files; inferred from extensions if omitted.
    #[arg(long)]
    pub format: Option<String>,
    /// Measure id to separate the sets by (default eu_var).
    #[arg(long)]
    pub measure: Option<String>,
    /// Comma-separated per-label importance weights (variance family).
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Args, Debug)]
pub struct HistArgs {
    /// Prediction file.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// File format (csv or jsonl); inferred from the extension if omitted.
    #[arg(long)]
    pub format: Option<String>,
    /// Measure id to histogram (default tu_var).
    #[arg(long)]
    pub measure: Option<String>,
    /// Number of equal-width bins.
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {}
