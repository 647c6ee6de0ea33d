//! First- and second-order distributions on the probability simplex.
//!
//! A [`Categorical`] is a point of the (K-1)-simplex: a probability vector
//! over K class labels. A second-order distribution describes belief *about*
//! such a vector; here it is either a finite weighted [`AtomMixture`] of
//! categoricals or a [`DirichletQ`] given by its concentration parameters.
//!
//! All types are immutable after construction and every operation is a pure
//! function, so values can be shared freely across threads.

use crate::error::{Error, Result};
use crate::math::pairwise_sum_by;

/// Mass slack accepted when constructing a [`Categorical`]; inputs within
/// this distance of summing to 1 are renormalized exactly, anything worse is
/// rejected. Prediction files carry float round-off, hence the slack.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// Mass slack for mixture weights, which are produced in-process and should
/// be clean up to accumulated rounding.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A first-order distribution over K labels: entries in [0, 1] summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Categorical {
    probs: Vec<f64>,
}

impl Categorical {
    /// Validate and renormalize a probability vector (tolerance
    /// [`SIMPLEX_TOLERANCE`]).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, SIMPLEX_TOLERANCE)
    }

    /// Validate and renormalize with an explicit mass tolerance. Entries in
    /// `[-tol, 0)` are clamped to zero before renormalization.
    pub fn with_tolerance(mut probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::TooFewEntries {
                min: 2,
                got: probs.len(),
            });
        }
        for (index, v) in probs.iter_mut().enumerate() {
            if !v.is_finite() || *v < -tol || *v > 1.0 + tol {
                return Err(Error::EntryOutOfRange { index, value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum = pairwise_sum_by(probs.len(), |i| probs[i]);
        if (sum - 1.0).abs() > tol {
            return Err(Error::MassOutOfTolerance { sum, tol });
        }
        for v in probs.iter_mut() {
            *v /= sum;
        }
        Ok(Self { probs })
    }

    /// The uniform distribution on `k` labels.
    pub fn uniform(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewEntries { min: 2, got: k });
        }
        Ok(Self {
            probs: vec![1.0 / k as f64; k],
        })
    }

    /// The vertex distribution putting all mass on `label`.
    pub fn vertex(k: usize, label: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewEntries { min: 2, got: k });
        }
        if label >= k {
            return Err(Error::InvalidParameter {
                name: "label",
                reason: format!("index {label} out of range for {k} labels"),
            });
        }
        let mut probs = vec![0.0; k];
        probs[label] = 1.0;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of labels K.
    pub fn num_labels(&self) -> usize {
        self.probs.len()
    }

    /// Index of the largest entry; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.probs.iter().enumerate() {
            if v > self.probs[best] {
                best = i;
            }
        }
        best
    }

    /// True when every coordinate is strictly inside (0, 1).
    pub fn is_interior(&self) -> bool {
        self.probs.iter().all(|&v| v > 0.0 && v < 1.0)
    }
}

/// A finite second-order distribution: a weighted mixture of first-order
/// atoms. A single atom with weight 1 is a Dirac measure.
///
/// Identical atoms are allowed and are not deduplicated, so measures stay
/// exactly equal under splitting an atom's weight.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomMixture {
    atoms: Vec<Categorical>,
    weights: Vec<f64>,
}

impl AtomMixture {
    /// Build a mixture from atoms and nonnegative weights summing to 1
    /// (tolerance [`WEIGHT_TOLERANCE`], renormalized exactly).
    pub fn new(atoms: Vec<Categorical>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyMixture);
        }
        if atoms.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: atoms.len(),
                got: weights.len(),
            });
        }
        let k = atoms[0].num_labels();
        for atom in &atoms[1..] {
            if atom.num_labels() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: atom.num_labels(),
                });
            }
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::EntryOutOfRange { index, value: w });
            }
        }
        let sum = pairwise_sum_by(weights.len(), |i| weights[i]);
        if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::MassOutOfTolerance {
                sum,
                tol: WEIGHT_TOLERANCE,
            });
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(Self { atoms, weights })
    }

    /// The Dirac measure concentrated on `theta`.
    pub fn dirac(theta: Categorical) -> Self {
        Self {
            atoms: vec![theta],
            weights: vec![1.0],
        }
    }

    /// The empirical second-order distribution of an ensemble: its members
    /// as atoms, each with weight 1/M.
    ///
    /// ```
    /// use varuq::simplex::{AtomMixture, Categorical};
    ///
    /// let members = [
    ///     Categorical::new(vec![0.6, 0.4])?,
    ///     Categorical::new(vec![0.4, 0.6])?,
    /// ];
    /// let q = AtomMixture::from_ensemble(&members)?;
    /// assert_eq!(q.weights(), &[0.5, 0.5]);
    /// assert_eq!(q.mean().probs(), &[0.5, 0.5]);
    /// # Ok::<(), varuq::Error>(())
    /// ```
    pub fn from_ensemble(members: &[Categorical]) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyMixture);
        }
        let m = members.len();
        Self::new(members.to_vec(), vec![1.0 / m as f64; m])
    }

    /// A mixture of Dirac measures on the K vertex distributions, with the
    /// given mixture weights (nonnegative, summing to 1).
    pub fn dirac_mixture(lambdas: &[f64]) -> Result<Self> {
        let k = lambdas.len();
        if k < 2 {
            return Err(Error::TooFewEntries { min: 2, got: k });
        }
        for (index, &l) in lambdas.iter().enumerate() {
            if !l.is_finite() || l < 0.0 {
                return Err(Error::EntryOutOfRange { index, value: l });
            }
        }
        let sum = pairwise_sum_by(k, |i| lambdas[i]);
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::MassOutOfTolerance {
                sum,
                tol: SIMPLEX_TOLERANCE,
            });
        }
        let atoms = (0..k)
            .map(|label| Categorical::vertex(k, label))
            .collect::<Result<Vec<_>>>()?;
        let weights = lambdas.iter().map(|&l| l / sum).collect();
        Ok(Self { atoms, weights })
    }

    /// The mean `E[Θ]`: the weighted average of the atoms, itself a valid
    /// first-order distribution.
    pub fn mean(&self) -> Categorical {
        let k = self.num_labels();
        let probs: Vec<f64> = (0..k).map(|label| self.mean_coordinate(label)).collect();
        Categorical::new(probs).expect("mixture mean stays on the simplex")
    }

    /// Raw weighted sum of one coordinate over the atoms, without the final
    /// simplex renormalization. The variance measures use this directly so
    /// the law of total variance holds at float precision.
    pub(crate) fn mean_coordinate(&self, label: usize) -> f64 {
        pairwise_sum_by(self.atoms.len(), |i| {
            self.weights[i] * self.atoms[i].probs()[label]
        })
    }

    pub fn atoms(&self) -> &[Categorical] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Number of labels K shared by all atoms.
    pub fn num_labels(&self) -> usize {
        self.atoms[0].num_labels()
    }
}

/// A Dirichlet second-order distribution, given by strictly positive
/// concentration parameters. Exposed through sampling and closed-form
/// moments only; no density evaluation is needed anywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletQ {
    alpha: Vec<f64>,
}

impl DirichletQ {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(Error::TooFewEntries {
                min: 2,
                got: alpha.len(),
            });
        }
        for (index, &a) in alpha.iter().enumerate() {
            if !a.is_finite() || a <= 0.0 {
                return Err(Error::EntryOutOfRange { index, value: a });
            }
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Total concentration, the sum of the parameters.
    pub fn total(&self) -> f64 {
        pairwise_sum_by(self.alpha.len(), |i| self.alpha[i])
    }

    pub fn num_labels(&self) -> usize {
        self.alpha.len()
    }

    /// The mean `E[Θ]`, with coordinates `alpha_k / alpha_0`.
    pub fn mean(&self) -> Categorical {
        let total = self.total();
        let probs = self.alpha.iter().map(|&a| a / total).collect();
        Categorical::new(probs).expect("Dirichlet mean stays on the simplex")
    }
}

/// Strictly positive per-label importance weights for the aggregate
/// variance measures.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    w: Vec<f64>,
}

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::TooFewEntries { min: 1, got: 0 });
        }
        for (index, &v) in w.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::NonPositiveWeight { index, value: v });
            }
        }
        Ok(Self { w })
    }

    /// Unit weights (all 1), the default for the aggregate measures.
    pub fn unit(k: usize) -> Self {
        Self { w: vec![1.0; k] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn construction_renormalizes_within_tolerance() {
        let c = Categorical::new(vec![0.5 + 4e-10, 0.5]).unwrap();
        let sum: f64 = c.probs().iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn construction_rejects_beyond_tolerance() {
        assert!(matches!(
            Categorical::new(vec![0.5, 0.4]),
            Err(Error::MassOutOfTolerance { .. })
        ));
        assert!(matches!(
            Categorical::new(vec![1.5, -0.5]),
            Err(Error::EntryOutOfRange { .. })
        ));
        assert!(matches!(
            Categorical::new(vec![1.0]),
            Err(Error::TooFewEntries { .. })
        ));
    }

    #[test]
    fn argmax_ties_break_to_lowest_index() {
        let c = Categorical::new(vec![0.4, 0.4, 0.2]).unwrap();
        assert_eq!(c.argmax(), 0);
    }

    #[test]
    fn mean_of_symmetric_two_point_mixture_is_uniform() {
        let q = AtomMixture::new(
            vec![
                Categorical::new(vec![1.0, 0.0]).unwrap(),
                Categorical::new(vec![0.0, 1.0]).unwrap(),
            ],
            vec![0.5, 0.5],
        )
        .unwrap();
        assert_eq!(q.mean().probs(), &[0.5, 0.5]);
    }

    #[test]
    fn mean_of_dirac_is_its_atom() {
        let theta = Categorical::new(vec![0.2, 0.8]).unwrap();
        let q = AtomMixture::dirac(theta.clone());
        assert_eq!(q.mean(), theta);
    }

    #[test]
    fn from_ensemble_uses_equal_weights() {
        let single =
            AtomMixture::from_ensemble(&[Categorical::new(vec![1.0, 0.0]).unwrap()]).unwrap();
        assert_eq!(single.num_atoms(), 1);
        assert_eq!(single.weights(), &[1.0]);

        let pair = AtomMixture::from_ensemble(&[
            Categorical::new(vec![0.6, 0.4]).unwrap(),
            Categorical::new(vec![0.4, 0.6]).unwrap(),
        ])
        .unwrap();
        assert_eq!(pair.weights(), &[0.5, 0.5]);
        assert_eq!(pair.atoms()[0].probs(), &[0.6, 0.4]);

        let five = AtomMixture::from_ensemble(&vec![Categorical::new(vec![0.5, 0.5]).unwrap(); 5])
            .unwrap();
        assert!(five.weights().iter().all(|&w| (w - 0.2).abs() < 1e-15));
    }

    #[test]
    fn from_ensemble_rejects_mismatched_dimensions() {
        let members = [
            Categorical::new(vec![0.6, 0.4]).unwrap(),
            Categorical::new(vec![0.3, 0.3, 0.4]).unwrap(),
        ];
        assert!(matches!(
            AtomMixture::from_ensemble(&members),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ensemble_mean_matches_componentwise_average() {
        let members = [
            Categorical::new(vec![0.1, 0.7, 0.2]).unwrap(),
            Categorical::new(vec![0.5, 0.25, 0.25]).unwrap(),
            Categorical::new(vec![0.3, 0.3, 0.4]).unwrap(),
        ];
        let q = AtomMixture::from_ensemble(&members).unwrap();
        let mean = q.mean();
        for k in 0..3 {
            let avg: f64 = members.iter().map(|m| m.probs()[k]).sum::<f64>() / 3.0;
            assert_abs_diff_eq!(mean.probs()[k], avg, epsilon = 1e-12);
        }
    }

    #[test]
    fn dirac_mixture_places_mass_on_vertices() {
        let q = AtomMixture::dirac_mixture(&[0.5, 0.5]).unwrap();
        assert_eq!(q.atoms()[0].probs(), &[1.0, 0.0]);
        assert_eq!(q.atoms()[1].probs(), &[0.0, 1.0]);
        assert_eq!(q.weights(), &[0.5, 0.5]);

        let degenerate = AtomMixture::dirac_mixture(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(degenerate.mean().probs(), &[1.0, 0.0, 0.0]);

        let skewed = AtomMixture::dirac_mixture(&[0.3, 0.7]).unwrap();
        assert_eq!(skewed.weights(), &[0.3, 0.7]);
    }

    #[test]
    fn dirac_mixture_rejects_invalid_lambdas() {
        assert!(AtomMixture::dirac_mixture(&[0.5, 0.6]).is_err());
        assert!(AtomMixture::dirac_mixture(&[-0.1, 1.1]).is_err());
    }

    #[test]
    fn dirichlet_mean_reproduces_alpha_when_scaled() {
        let q = DirichletQ::new(vec![2.0, 8.0]).unwrap();
        assert_eq!(q.mean().probs(), &[0.2, 0.8]);

        let q = DirichletQ::new(vec![1.3, 0.4, 2.2, 0.1]).unwrap();
        let total = q.total();
        for (m, &a) in q.mean().probs().iter().zip(q.alpha()) {
            assert_abs_diff_eq!(m * total, a, epsilon = 1e-12);
        }
    }

    #[test]
    fn dirichlet_rejects_nonpositive_alpha() {
        assert!(DirichletQ::new(vec![1.0, 0.0]).is_err());
        assert!(DirichletQ::new(vec![1.0]).is_err());
    }

    #[test]
    fn weight_vector_requires_strict_positivity() {
        assert!(WeightVector::new(vec![1.0, 2.0]).is_ok());
        assert!(matches!(
            WeightVector::new(vec![1.0, 0.0]),
            Err(Error::NonPositiveWeight { .. })
        ));
    }
}
