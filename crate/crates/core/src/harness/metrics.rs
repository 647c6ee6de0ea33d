//! Selective-prediction and separation metrics: accuracy-rejection curves,
//! rank-based AUROC with midrank ties, and correct/incorrect histograms.

use crate::error::{Error, Result};
use crate::harness::records::PredictionRecord;
use crate::par;

/// One point of an accuracy-rejection curve. `accuracy` is `None` when the
/// rejection left no instances to evaluate (the point is kept as a marker).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcPoint {
    pub fraction: f64,
    pub accuracy: Option<f64>,
    pub retained: usize,
}

/// Accuracy of the retained predictions as a function of the fraction of
/// most-uncertain instances rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcCurve {
    pub points: Vec<ArcPoint>,
}

impl ArcCurve {
    /// Accuracy at the grid point with the given fraction, if present and
    /// evaluable.
    pub fn accuracy_at(&self, fraction: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|p| (p.fraction - fraction).abs() < 1e-12)
            .and_then(|p| p.accuracy)
    }
}

/// The default rejection grid: 0 to 0.99 in steps of 0.01.
pub fn default_grid() -> Vec<f64> {
    (0..100).map(|i| i as f64 / 100.0).collect()
}

/// Build the accuracy-rejection curve for aligned records and scores.
///
/// At fraction r the ⌈rN⌉ highest-score instances are rejected — ties
/// broken by record order, earlier records rejected first — and accuracy of
/// the ensemble-mean argmax prediction is reported on the rest. The grid
/// must be strictly increasing within [0, 1).
pub fn arc(records: &[PredictionRecord], scores: &[f64], grid: &[f64]) -> Result<ArcCurve> {
    if records.len() != scores.len() {
        return Err(Error::DimensionMismatch {
            expected: records.len(),
            got: scores.len(),
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyMixture);
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "rejection grid is empty".into(),
        });
    }
    for (i, &g) in grid.iter().enumerate() {
        if !(0.0..1.0).contains(&g) {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("fraction {g} outside [0, 1)"),
            });
        }
        if i > 0 && g <= grid[i - 1] {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "fractions must be strictly increasing".into(),
            });
        }
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "scores",
            reason: "scores must be finite".into(),
        });
    }

    let n = records.len();
    let correct: Vec<bool> = par::map_collect(records, |r| r.predicted_label() == r.label);
    // rejection order: highest score first, ties by record order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    // prefix[j] = number of correct predictions among the j first-rejected
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0usize);
    for &i in &order {
        prefix.push(prefix.last().unwrap() + usize::from(correct[i]));
    }
    let total_correct = prefix[n];

    let points = grid
        .iter()
        .map(|&fraction| {
            let reject = ((fraction * n as f64).ceil() as usize).min(n);
            let retained = n - reject;
            let accuracy = if retained == 0 {
                None
            } else {
                Some((total_correct - prefix[reject]) as f64 / retained as f64)
            };
            ArcPoint {
                fraction,
                accuracy,
                retained,
            }
        })
        .collect();
    Ok(ArcCurve { points })
}

/// Rank-based AUROC with midrank tie handling.
///
/// Equals the probability that an out-of-distribution score exceeds an
/// in-distribution one, counting ties as one half; identical multisets give
/// exactly 0.5.
pub fn auroc(id_scores: &[f64], ood_scores: &[f64]) -> Result<f64> {
    if id_scores.is_empty() || ood_scores.is_empty() {
        return Err(Error::EmptyMixture);
    }
    if id_scores.iter().chain(ood_scores).any(|s| !s.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "scores",
            reason: "scores must be finite".into(),
        });
    }
    let n_id = id_scores.len();
    let n_ood = ood_scores.len();
    let mut all: Vec<(f64, bool)> = Vec::with_capacity(n_id + n_ood);
    all.extend(id_scores.iter().map(|&s| (s, false)));
    all.extend(ood_scores.iter().map(|&s| (s, true)));
    all.sort_by(|a, b| a.0.total_cmp(&b.0));

    // sum of 1-based midranks over the out-of-distribution scores
    let mut rank_sum = 0.0f64;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j + 1 < all.len() && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        for item in &all[i..=j] {
            if item.1 {
                rank_sum += midrank;
            }
        }
        i = j + 1;
    }
    let m = n_ood as f64;
    let u = rank_sum - m * (m + 1.0) / 2.0;
    Ok(u / (n_id as f64 * m))
}

/// Minimum, median, and maximum of a score set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreSummary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

pub fn summarize(scores: &[f64]) -> Result<ScoreSummary> {
    if scores.is_empty() {
        return Err(Error::EmptyMixture);
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    Ok(ScoreSummary {
        min: sorted[0],
        median,
        max: sorted[n - 1],
    })
}

/// Out-of-distribution separation report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OodReport {
    pub auroc: f64,
    pub id_summary: ScoreSummary,
    pub ood_summary: ScoreSummary,
}

pub fn ood_report(id_scores: &[f64], ood_scores: &[f64]) -> Result<OodReport> {
    Ok(OodReport {
        auroc: auroc(id_scores, ood_scores)?,
        id_summary: summarize(id_scores)?,
        ood_summary: summarize(ood_scores)?,
    })
}

/// Aligned equal-width histograms of the scores of correctly and
/// incorrectly classified instances. `edges` has one more entry than each
/// count vector.
#[derive(Clone, Debug, PartialEq)]
pub struct HistogramSplit {
    pub edges: Vec<f64>,
    pub correct: Vec<usize>,
    pub incorrect: Vec<usize>,
}

/// Split the scores by classification correctness and bin both sets over
/// the common observed range. A degenerate range (all scores equal) puts
/// everything in the first bin.
pub fn histogram_split(
    records: &[PredictionRecord],
    scores: &[f64],
    bins: usize,
) -> Result<HistogramSplit> {
    if records.len() != scores.len() {
        return Err(Error::DimensionMismatch {
            expected: records.len(),
            got: scores.len(),
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyMixture);
    }
    if bins < 2 {
        return Err(Error::InvalidParameter {
            name: "bins",
            reason: "need at least 2 bins".into(),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "scores",
            reason: "scores must be finite".into(),
        });
    }
    let min = scores.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| min + i as f64 * width).collect();
    let mut correct = vec![0usize; bins];
    let mut incorrect = vec![0usize; bins];
    let is_correct: Vec<bool> = par::map_collect(records, |r| r.predicted_label() == r.label);
    for (i, &s) in scores.iter().enumerate() {
        let bin = if width > 0.0 {
            (((s - min) / width) as usize).min(bins - 1)
        } else {
            0
        };
        if is_correct[i] {
            correct[bin] += 1;
        } else {
            incorrect[bin] += 1;
        }
    }
    Ok(HistogramSplit {
        edges,
        correct,
        incorrect,
    })
}
