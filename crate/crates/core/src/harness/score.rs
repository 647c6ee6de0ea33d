//! Per-instance uncertainty scoring over prediction records.

use crate::entropy::entropy_triple;
use crate::error::{Error, Result};
use crate::harness::records::PredictionRecord;
use crate::oracles::MeasureId;
use crate::par;
use crate::simplex::WeightVector;
use crate::variance::{aggregate_labelwise, labelwise, LabelwiseTriple};

/// Scores for a batch of records, plus the per-label triples that the
/// variance family always carries.
#[derive(Clone, Debug)]
pub struct ScoreOutput {
    pub scores: Vec<f64>,
    pub labelwise: Option<Vec<LabelwiseTriple>>,
}

/// Score each record with the named measure.
///
/// Entropy scores are in bits; variance scores are the weight-aggregated
/// sums (unit weights unless given). Records evaluate in parallel and the
/// output order matches the input order exactly.
pub fn score(
    records: &[PredictionRecord],
    measure: MeasureId,
    weights: Option<&WeightVector>,
) -> Result<ScoreOutput> {
    if records.is_empty() {
        return Err(Error::EmptyMixture);
    }
    if let Some(w) = weights {
        for r in records {
            if w.len() != r.num_labels() {
                return Err(Error::DimensionMismatch {
                    expected: r.num_labels(),
                    got: w.len(),
                });
            }
        }
    }
    if measure.is_variance() {
        let per_record: Vec<Result<(f64, LabelwiseTriple)>> = par::map_collect(records, |r| {
            let lw = labelwise(&r.ensemble());
            let w = match weights {
                Some(w) => w.clone(),
                None => WeightVector::unit(r.num_labels()),
            };
            let agg = aggregate_labelwise(&lw, &w, false)?;
            let value = match measure {
                MeasureId::TuVar => agg.tu,
                MeasureId::AuVar => agg.au,
                _ => agg.eu,
            };
            Ok((value, lw))
        });
        let mut scores = Vec::with_capacity(records.len());
        let mut triples = Vec::with_capacity(records.len());
        for item in per_record {
            let (value, lw) = item?;
            scores.push(value);
            triples.push(lw);
        }
        Ok(ScoreOutput {
            scores,
            labelwise: Some(triples),
        })
    } else {
        let scores = par::map_collect(records, |r| {
            let t = entropy_triple(&r.ensemble());
            match measure {
                MeasureId::TuEnt => t.tu,
                MeasureId::AuEnt => t.au,
                _ => t.eu,
            }
        });
        Ok(ScoreOutput {
            scores,
            labelwise: None,
        })
    }
}
