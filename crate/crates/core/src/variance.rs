//! Variance-based uncertainty measures, label-wise and aggregate.
//!
//! For the indicator variable of label k under a second-order distribution
//! Q, the law of total variance splits Var(Y_k) into the expected
//! conditional variance and the variance of the conditional mean:
//!
//! ```text
//! Var(Y_k) = E[Θ_k (1 − Θ_k)] + Var(Θ_k)
//!   tu_k   =       au_k       +   eu_k
//! ```
//!
//! The decomposition is algebraic, so it holds at float precision for any
//! finite atom mixture. Aggregate measures sum the label-wise components
//! with strictly positive importance weights; with unit weights the maximum
//! attainable total is 1 − 1/K, and [`beta_maximizer`] gives the maximizing
//! first-order distribution for general weights.

use crate::error::{Error, Result};
use crate::math::pairwise_sum_by;
use crate::simplex::{AtomMixture, Categorical, WeightVector};

/// Per-label uncertainty components. Each lies in [0, 1/4] and
/// `tu = au + eu` up to float rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabelTriple {
    pub tu: f64,
    pub au: f64,
    pub eu: f64,
}

/// The label-wise triples for all K labels of a mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelwiseTriple {
    per_label: Vec<LabelTriple>,
}

impl LabelwiseTriple {
    pub(crate) fn from_parts(per_label: Vec<LabelTriple>) -> Self {
        Self { per_label }
    }

    pub fn per_label(&self) -> &[LabelTriple] {
        &self.per_label
    }

    pub fn num_labels(&self) -> usize {
        self.per_label.len()
    }
}

fn label_triple(q: &AtomMixture, label: usize) -> LabelTriple {
    let atoms = q.atoms();
    let weights = q.weights();
    let mean = q.mean_coordinate(label);
    let au = pairwise_sum_by(atoms.len(), |i| {
        let p = atoms[i].probs()[label];
        weights[i] * p * (1.0 - p)
    });
    let eu = pairwise_sum_by(atoms.len(), |i| {
        let d = atoms[i].probs()[label] - mean;
        weights[i] * d * d
    });
    LabelTriple {
        tu: mean * (1.0 - mean),
        au,
        eu,
    }
}

/// Label-wise total/aleatoric/epistemic uncertainty of a finite mixture.
///
/// ```
/// use varuq::simplex::AtomMixture;
/// use varuq::variance::labelwise;
///
/// // belief split between the two vertex distributions: every label's
/// // indicator variance is pure dispersion of belief
/// let q = AtomMixture::dirac_mixture(&[0.5, 0.5])?;
/// let t = labelwise(&q).per_label()[0];
/// assert_eq!((t.tu, t.au, t.eu), (0.25, 0.0, 0.25));
/// # Ok::<(), varuq::Error>(())
/// ```
pub fn labelwise(q: &AtomMixture) -> LabelwiseTriple {
    let per_label = (0..q.num_labels()).map(|k| label_triple(q, k)).collect();
    LabelwiseTriple::from_parts(per_label)
}

/// Label-wise triples restricted to a subset of the labels.
///
/// The atoms are restricted to the listed coordinates *without*
/// renormalizing: the indicator-variable variances are computed on the
/// original probabilities, so summing over a partition of the labels
/// reproduces the full label-wise sums exactly.
pub fn labelwise_subset(q: &AtomMixture, labels: &[usize]) -> Result<LabelwiseTriple> {
    let k = q.num_labels();
    for &label in labels {
        if label >= k {
            return Err(Error::InvalidParameter {
                name: "labels",
                reason: format!("index {label} out of range for {k} labels"),
            });
        }
    }
    let per_label = labels.iter().map(|&label| label_triple(q, label)).collect();
    Ok(LabelwiseTriple::from_parts(per_label))
}

/// Aggregate values rescaled to [0, 1] by the maximum attainable total.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalized {
    pub tu: f64,
    pub au: f64,
    pub eu: f64,
}

/// Weighted sums of the label-wise components, with optional normalized
/// copies.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateTriple {
    pub tu: f64,
    pub au: f64,
    pub eu: f64,
    pub normalized: Option<Normalized>,
}

/// Aggregate a precomputed label-wise triple with importance weights.
///
/// When `normalize` is set, all three components are divided by the maximum
/// attainable total V(β) — which is 1 − 1/K for unit weights — placing them
/// in [0, 1]. Normalization fails with [`Error::ConstrainedMaximum`] when
/// the closed-form maximizer leaves the simplex.
pub fn aggregate_labelwise(
    lw: &LabelwiseTriple,
    w: &WeightVector,
    normalize: bool,
) -> Result<AggregateTriple> {
    if w.len() != lw.num_labels() {
        return Err(Error::DimensionMismatch {
            expected: lw.num_labels(),
            got: w.len(),
        });
    }
    let ws = w.as_slice();
    let per = lw.per_label();
    let tu = pairwise_sum_by(per.len(), |k| ws[k] * per[k].tu);
    let au = pairwise_sum_by(per.len(), |k| ws[k] * per[k].au);
    let eu = pairwise_sum_by(per.len(), |k| ws[k] * per[k].eu);
    let normalized = if normalize {
        let beta = beta_maximizer(w)?;
        let vmax = concavity_value(&beta, w)?;
        Some(Normalized {
            tu: tu / vmax,
            au: au / vmax,
            eu: eu / vmax,
        })
    } else {
        None
    };
    Ok(AggregateTriple {
        tu,
        au,
        eu,
        normalized,
    })
}

/// Aggregate total/aleatoric/epistemic uncertainty of a mixture.
pub fn aggregate(q: &AtomMixture, w: &WeightVector, normalize: bool) -> Result<AggregateTriple> {
    aggregate_labelwise(&labelwise(q), w, normalize)
}

/// The unique maximizer β of `V(θ) = Σ w_k θ_k (1 − θ_k)` on the simplex,
/// in closed form:
///
/// ```text
/// β_k = (1 − ((K − 2) / w_k) / Σ_j 1/w_j) / 2
/// ```
///
/// For equal weights this is the barycenter, and for K = 2 it is (1/2, 1/2)
/// for any weights. Extreme weight ratios with K ≥ 4 can push a coordinate
/// negative; that case is surfaced as [`Error::ConstrainedMaximum`], with
/// the grid oracle as the constrained fallback.
pub fn beta_maximizer(w: &WeightVector) -> Result<Categorical> {
    let k = w.len();
    if k < 2 {
        return Err(Error::TooFewEntries { min: 2, got: k });
    }
    let ws = w.as_slice();
    let inv_sum = pairwise_sum_by(k, |j| 1.0 / ws[j]);
    let mut beta = Vec::with_capacity(k);
    for (index, &wk) in ws.iter().enumerate() {
        let b = 0.5 * (1.0 - ((k as f64 - 2.0) / wk) / inv_sum);
        if b < 0.0 {
            return Err(Error::ConstrainedMaximum { index, value: b });
        }
        beta.push(b);
    }
    Categorical::new(beta)
}

/// Evaluate `V(θ) = Σ w_k θ_k (1 − θ_k)`, the weighted sum of indicator
/// variances at a fixed first-order distribution.
pub fn concavity_value(theta: &Categorical, w: &WeightVector) -> Result<f64> {
    if theta.num_labels() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: theta.num_labels(),
            got: w.len(),
        });
    }
    Ok(concavity_value_raw(theta.probs(), w.as_slice()))
}

/// Unchecked slice variant of [`concavity_value`], for tight loops such as
/// the grid oracle.
pub fn concavity_value_raw(theta: &[f64], w: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (t, wk) in theta.iter().zip(w) {
        acc += wk * t * (1.0 - t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cat(p: &[f64]) -> Categorical {
        Categorical::new(p.to_vec()).unwrap()
    }

    #[test]
    fn dirac_at_uniform_has_no_dispersion() {
        let q = AtomMixture::dirac(cat(&[0.5, 0.5]));
        for t in labelwise(&q).per_label() {
            assert_abs_diff_eq!(t.tu, 0.25, epsilon = 1e-15);
            assert_abs_diff_eq!(t.au, 0.25, epsilon = 1e-15);
            assert_eq!(t.eu, 0.0);
        }
    }

    #[test]
    fn vertex_pair_is_pure_dispersion() {
        // Fair Bernoulli over the two vertices: Var(Y_k) = 1/4 and every
        // atom has zero conditional variance.
        let q = AtomMixture::dirac_mixture(&[0.5, 0.5]).unwrap();
        for t in labelwise(&q).per_label() {
            assert_abs_diff_eq!(t.tu, 0.25, epsilon = 1e-15);
            assert_eq!(t.au, 0.0);
            assert_abs_diff_eq!(t.eu, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn total_splits_into_parts_exactly() {
        let q = AtomMixture::new(
            vec![
                cat(&[0.9, 0.05, 0.05]),
                cat(&[0.2, 0.5, 0.3]),
                cat(&[0.1, 0.1, 0.8]),
            ],
            vec![0.25, 0.5, 0.25],
        )
        .unwrap();
        for t in labelwise(&q).per_label() {
            assert_abs_diff_eq!(t.tu, t.au + t.eu, epsilon = 1e-15);
            assert!(t.tu <= 0.25 + 1e-15);
            assert!(t.au >= 0.0 && t.eu >= 0.0);
        }
    }

    #[test]
    fn subset_triples_match_full_computation() {
        let q = AtomMixture::new(
            vec![cat(&[0.4, 0.3, 0.2, 0.1]), cat(&[0.1, 0.2, 0.3, 0.4])],
            vec![0.5, 0.5],
        )
        .unwrap();
        let full = labelwise(&q);
        let sub = labelwise_subset(&q, &[2, 0]).unwrap();
        assert_eq!(sub.per_label()[0], full.per_label()[2]);
        assert_eq!(sub.per_label()[1], full.per_label()[0]);
        assert!(labelwise_subset(&q, &[4]).is_err());
    }

    #[test]
    fn aggregate_of_dirac_has_zero_epistemic_part() {
        let q = AtomMixture::dirac(cat(&[0.3, 0.2, 0.5]));
        let w = WeightVector::new(vec![1.0, 2.5, 0.4]).unwrap();
        let agg = aggregate(&q, &w, false).unwrap();
        assert_eq!(agg.eu, 0.0);
        assert_abs_diff_eq!(agg.tu, agg.au, epsilon = 1e-15);
    }

    #[test]
    fn normalized_vertex_pair_reaches_the_extremes() {
        // Raw (1/2, 0, 1/2) divided by 1 − 1/2.
        let q = AtomMixture::dirac_mixture(&[0.5, 0.5]).unwrap();
        let agg = aggregate(&q, &WeightVector::unit(2), true).unwrap();
        assert_abs_diff_eq!(agg.tu, 0.5, epsilon = 1e-15);
        assert_eq!(agg.au, 0.0);
        assert_abs_diff_eq!(agg.eu, 0.5, epsilon = 1e-15);
        let n = agg.normalized.unwrap();
        assert_abs_diff_eq!(n.tu, 1.0, epsilon = 1e-15);
        assert_eq!(n.au, 0.0);
        assert_abs_diff_eq!(n.eu, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn flat_prior_aggregate_doubles_the_labelwise_moments() {
        // two symmetric labels carry (1/4, 1/6, 1/12) each
        use crate::oracles::{sample_q, SamplerFamily, SamplerSpec};
        let q = sample_q(
            &SamplerSpec::new(
                SamplerFamily::UniformInterval { lo: 0.0, hi: 1.0 },
                100_000,
                19,
            )
            .unwrap(),
        )
        .unwrap();
        let agg = aggregate(&q, &WeightVector::unit(2), false).unwrap();
        assert_abs_diff_eq!(agg.tu, 0.5, epsilon = 3e-3);
        assert_abs_diff_eq!(agg.au, 1.0 / 3.0, epsilon = 3e-3);
        assert_abs_diff_eq!(agg.eu, 1.0 / 6.0, epsilon = 3e-3);
    }

    #[test]
    fn aggregate_rejects_weight_length_mismatch() {
        let q = AtomMixture::dirac(cat(&[0.5, 0.5]));
        let w = WeightVector::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            aggregate(&q, &w, false),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn equal_weights_maximizer_is_the_barycenter() {
        for k in 2..=6 {
            let beta = beta_maximizer(&WeightVector::unit(k)).unwrap();
            for &b in beta.probs() {
                assert_abs_diff_eq!(b, 1.0 / k as f64, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn binary_maximizer_is_center_for_any_weights() {
        let w = WeightVector::new(vec![0.1, 17.0]).unwrap();
        let beta = beta_maximizer(&w).unwrap();
        assert_eq!(beta.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn skewed_three_label_maximizer() {
        // Numerical maximization over a simplex grid agrees in the oracle
        // module; the closed form gives (0.3, 0.3, 0.4) here.
        let w = WeightVector::new(vec![1.0, 1.0, 2.0]).unwrap();
        let beta = beta_maximizer(&w).unwrap();
        assert_abs_diff_eq!(beta.probs()[0], 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(beta.probs()[1], 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(beta.probs()[2], 0.4, epsilon = 1e-12);
    }

    #[test]
    fn extreme_weights_surface_the_boundary_case() {
        let w = WeightVector::new(vec![0.05, 4.0, 4.0, 4.0]).unwrap();
        assert!(matches!(
            beta_maximizer(&w),
            Err(Error::ConstrainedMaximum { .. })
        ));
    }

    #[test]
    fn concavity_value_cases() {
        let k = 4;
        let v = concavity_value(&Categorical::uniform(k).unwrap(), &WeightVector::unit(k)).unwrap();
        assert_abs_diff_eq!(v, 1.0 - 1.0 / k as f64, epsilon = 1e-12);

        let vertex = Categorical::vertex(3, 1).unwrap();
        assert_eq!(
            concavity_value(&vertex, &WeightVector::unit(3)).unwrap(),
            0.0
        );

        // 0.3·0.7 + 0.3·0.7 + 2·0.4·0.6 = 0.9, against a naive loop.
        let theta = cat(&[0.3, 0.3, 0.4]);
        let w = WeightVector::new(vec![1.0, 1.0, 2.0]).unwrap();
        let got = concavity_value(&theta, &w).unwrap();
        let mut naive = 0.0;
        for k in 0..3 {
            naive += w.as_slice()[k] * theta.probs()[k] * (1.0 - theta.probs()[k]);
        }
        assert_abs_diff_eq!(got, 0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(got, naive, epsilon = 1e-15);
    }
}
