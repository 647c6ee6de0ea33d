//! Experiment harness: prediction-file ingestion, per-instance scoring,
//! accuracy-rejection curves, out-of-distribution AUROC, correct/incorrect
//! histograms, and a synthetic data generator with a trainable ensemble.

pub mod metrics;
pub mod records;
pub mod report;
pub mod score;
pub mod synth;

pub use metrics::{
    arc, auroc, default_grid, histogram_split, ood_report, summarize, ArcCurve, ArcPoint,
    HistogramSplit, OodReport, ScoreSummary,
};
pub use records::{
    load_predictions, write_predictions_csv, FileFormat, PredictionRecord, MEMBER_MASS_TOLERANCE,
};
pub use score::{score, ScoreOutput};
pub use synth::{synth_run, ClassCluster, SynthOutput, SyntheticConfig};
