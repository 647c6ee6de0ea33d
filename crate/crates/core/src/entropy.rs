//! Entropy-based uncertainty measures, the information-theoretic baseline.
//!
//! For a finite mixture Q the three components are
//!
//! - total: the Shannon entropy of the mixture mean,
//! - aleatoric: the weighted average of the atoms' entropies
//!   (conditional entropy),
//! - epistemic: the weighted average KL divergence of each atom from the
//!   mean (mutual information).
//!
//! Everything is measured in bits (base-2 logarithms), and total equals
//! aleatoric plus epistemic up to float rounding.

use crate::error::{Error, Result};
use crate::math::pairwise_sum_by;
use crate::simplex::{AtomMixture, Categorical};

const LN_2: f64 = std::f64::consts::LN_2;

/// Shannon entropy in bits, with the continuity convention 0·log 0 = 0.
/// The result lies in [0, log2 K].
pub fn shannon_entropy(theta: &Categorical) -> f64 {
    let p = theta.probs();
    pairwise_sum_by(p.len(), |k| {
        if p[k] > 0.0 {
            -p[k] * p[k].ln() / LN_2
        } else {
            0.0
        }
    })
}

/// Kullback-Leibler divergence KL(p || q) in bits.
///
/// If `p` puts mass where `q` has none the divergence is `f64::INFINITY`,
/// returned as a distinguished value rather than an error so callers can
/// observe the failure mode.
pub fn kl_divergence(p: &Categorical, q: &Categorical) -> Result<f64> {
    if p.num_labels() != q.num_labels() {
        return Err(Error::DimensionMismatch {
            expected: p.num_labels(),
            got: q.num_labels(),
        });
    }
    let (ps, qs) = (p.probs(), q.probs());
    for k in 0..ps.len() {
        if ps[k] > 0.0 && qs[k] == 0.0 {
            return Ok(f64::INFINITY);
        }
    }
    Ok(pairwise_sum_by(ps.len(), |k| {
        if ps[k] > 0.0 {
            ps[k] * (ps[k] / qs[k]).ln() / LN_2
        } else {
            0.0
        }
    }))
}

/// Total, aleatoric, and epistemic uncertainty in bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyTriple {
    pub tu: f64,
    pub au: f64,
    pub eu: f64,
}

/// Evaluate the entropy-based triple on a finite mixture.
///
/// Zero-weight atoms are skipped: they carry no mass, and skipping them
/// avoids a spurious 0·∞ when such an atom's support is not contained in
/// the mean's. Positive-weight atoms always are contained, so `eu` is
/// finite.
pub fn entropy_triple(q: &AtomMixture) -> EntropyTriple {
    let mean = q.mean();
    let atoms = q.atoms();
    let weights = q.weights();
    let tu = shannon_entropy(&mean);
    let au = pairwise_sum_by(atoms.len(), |i| {
        if weights[i] > 0.0 {
            weights[i] * shannon_entropy(&atoms[i])
        } else {
            0.0
        }
    });
    let eu = pairwise_sum_by(atoms.len(), |i| {
        if weights[i] > 0.0 {
            weights[i] * kl_divergence(&atoms[i], &mean).expect("atoms and mean share a dimension")
        } else {
            0.0
        }
    });
    EntropyTriple { tu, au, eu }
}
