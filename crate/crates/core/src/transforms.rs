//! Distribution modifications used by the axiom suite: mean-preserving
//! spreads, spread-preserving location shifts, and center shifts.
//!
//! A spread replaces each interior atom by a symmetric two-point split, so
//! the added noise has conditional mean zero exactly rather than only in
//! expectation over a sampler. Shifts translate every atom by a common
//! sum-zero vector; infeasible shifts (mass pushed off the simplex) are
//! rejected, never clipped.

use crate::error::{Error, Result};
use crate::simplex::{AtomMixture, Categorical};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Parameters of a mean-preserving spread: the fraction of the maximal
/// feasible step to take, and the seed for the split directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpreadSpec {
    epsilon: f64,
    seed: u64,
}

impl SpreadSpec {
    /// `epsilon` must lie in (0, 1].
    pub fn new(epsilon: f64, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("{epsilon} is outside (0, 1]"),
            });
        }
        Ok(Self { epsilon, seed })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draw a unit direction in the sum-zero plane.
fn sum_zero_direction(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    loop {
        let mut d: Vec<f64> = (0..k)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let mean = d.iter().sum::<f64>() / k as f64;
        for v in d.iter_mut() {
            *v -= mean;
        }
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for v in d.iter_mut() {
                *v /= norm;
            }
            return d;
        }
    }
}

/// Largest t such that both `x + t·d` and `x − t·d` stay in the simplex.
fn max_symmetric_step(x: &[f64], d: &[f64]) -> f64 {
    let mut t = f64::INFINITY;
    for (xk, dk) in x.iter().zip(d) {
        if dk.abs() > 0.0 {
            t = t.min(xk.min(1.0 - xk) / dk.abs());
        }
    }
    t
}

/// Replace each interior atom by a symmetric pair `x ± step·d`, each with
/// half the atom's weight, where `d` is a seeded random direction projected
/// onto the sum-zero plane and `step` is `epsilon` times the largest factor
/// keeping both endpoints in the simplex. Boundary atoms pass through
/// unchanged.
///
/// The construction preserves the mixture mean and strictly increases the
/// dispersion of at least one coordinate. Fails with
/// [`Error::CannotSpread`] when no atom is interior.
pub fn mean_preserving_spread(q: &AtomMixture, spec: &SpreadSpec) -> Result<AtomMixture> {
    if !q.atoms().iter().any(|a| a.is_interior()) {
        return Err(Error::CannotSpread);
    }
    let k = q.num_labels();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut atoms = Vec::with_capacity(q.num_atoms() * 2);
    let mut weights = Vec::with_capacity(q.num_atoms() * 2);
    for (atom, &w) in q.atoms().iter().zip(q.weights()) {
        if !atom.is_interior() {
            atoms.push(atom.clone());
            weights.push(w);
            continue;
        }
        let d = sum_zero_direction(&mut rng, k);
        let step = spec.epsilon * max_symmetric_step(atom.probs(), &d);
        let plus: Vec<f64> = atom
            .probs()
            .iter()
            .zip(&d)
            .map(|(x, dk)| x + step * dk)
            .collect();
        let minus: Vec<f64> = atom
            .probs()
            .iter()
            .zip(&d)
            .map(|(x, dk)| x - step * dk)
            .collect();
        atoms.push(Categorical::new(plus)?);
        atoms.push(Categorical::new(minus)?);
        weights.push(w / 2.0);
        weights.push(w / 2.0);
    }
    AtomMixture::new(atoms, weights)
}

/// Translate every atom by the sum-zero vector `z`, keeping the weights.
///
/// `z` must be nonzero with coordinates summing to zero, and every shifted
/// atom must remain on the simplex; otherwise [`Error::InfeasibleShift`].
pub fn location_shift(q: &AtomMixture, z: &[f64]) -> Result<AtomMixture> {
    let k = q.num_labels();
    if z.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: z.len(),
        });
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "z",
            reason: "shift has non-finite coordinates".into(),
        });
    }
    if z.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidParameter {
            name: "z",
            reason: "shift must be nonzero".into(),
        });
    }
    let sum: f64 = z.iter().sum();
    if sum.abs() > 1e-9 {
        return Err(Error::InvalidParameter {
            name: "z",
            reason: format!("coordinates sum to {sum}, not zero"),
        });
    }
    let mut atoms = Vec::with_capacity(q.num_atoms());
    for (ai, atom) in q.atoms().iter().enumerate() {
        let shifted: Vec<f64> = atom.probs().iter().zip(z).map(|(x, zk)| x + zk).collect();
        for (index, &v) in shifted.iter().enumerate() {
            if !(-1e-9..=1.0 + 1e-9).contains(&v) {
                return Err(Error::InfeasibleShift {
                    atom: ai,
                    index,
                    value: v,
                });
            }
        }
        atoms.push(Categorical::new(shifted)?);
    }
    AtomMixture::new(atoms, q.weights().to_vec())
}

/// Shift the mixture so its mean moves to `λ·mean + (1 − λ)·target`, by a
/// spread-preserving location shift. `target` defaults to the barycenter
/// (1/K, ..., 1/K) when `None`; `λ` must lie in (0, 1).
pub fn center_shift(
    q: &AtomMixture,
    lambda: f64,
    target: Option<&Categorical>,
) -> Result<AtomMixture> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: format!("{lambda} is outside (0, 1)"),
        });
    }
    let k = q.num_labels();
    let barycenter;
    let target = match target {
        Some(t) => {
            if t.num_labels() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: t.num_labels(),
                });
            }
            t
        }
        None => {
            barycenter = Categorical::uniform(k)?;
            &barycenter
        }
    };
    let mean = q.mean();
    let z: Vec<f64> = target
        .probs()
        .iter()
        .zip(mean.probs())
        .map(|(t, m)| (1.0 - lambda) * (t - m))
        .collect();
    location_shift(q, &z)
}
