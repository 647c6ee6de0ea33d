//! Independent references the main measures are validated against:
//! samplers over a Bernoulli parameter, closed-form Dirichlet moments,
//! Monte Carlo estimation with per-stream error bars, and a grid maximizer
//! that double-checks the closed-form simplex maximizer.

use crate::entropy::entropy_triple;
use crate::error::{Error, Result};
use crate::math::{derive_seed, mean_and_std_error};
use crate::par;
use crate::simplex::{AtomMixture, Categorical, DirichletQ, WeightVector};
use crate::variance::{concavity_value_raw, labelwise, LabelTriple, LabelwiseTriple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta as BetaDist, Distribution, Gamma, Normal};
use std::fmt;
use std::str::FromStr;

/// Families of second-order distributions over the parameter θ of a
/// Bernoulli first-order distribution (two labels: atoms are (θ, 1−θ)).
#[derive(Clone, Debug, PartialEq)]
pub enum SamplerFamily {
    /// θ uniform on [lo, hi] ⊆ [0, 1].
    UniformInterval { lo: f64, hi: f64 },
    /// θ normal with the given mean and standard deviation, truncated to
    /// [0, 1] by rejection.
    TruncatedGaussian { mu: f64, sigma: f64 },
    /// θ Beta-distributed with shape parameters (a, b).
    Beta { a: f64, b: f64 },
    /// An exact mixture of Dirac measures on the vertex distributions; no
    /// sampling is involved.
    DiracMix { lambdas: Vec<f64> },
}

/// A sampler family plus sample count and seed.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplerSpec {
    pub family: SamplerFamily,
    pub n: usize,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn new(family: SamplerFamily, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "sample count must be at least 1".into(),
            });
        }
        match &family {
            SamplerFamily::UniformInterval { lo, hi } => {
                if !(0.0 <= *lo && lo < hi && *hi <= 1.0) {
                    return Err(Error::InvalidParameter {
                        name: "interval",
                        reason: format!("[{lo}, {hi}] is not a subinterval of [0, 1]"),
                    });
                }
            }
            SamplerFamily::TruncatedGaussian { mu, sigma } => {
                if !(sigma.is_finite() && *sigma > 0.0) || !mu.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "gaussian",
                        reason: format!("mu={mu}, sigma={sigma}"),
                    });
                }
            }
            SamplerFamily::Beta { a, b } => {
                if !(a.is_finite() && *a > 0.0 && b.is_finite() && *b > 0.0) {
                    return Err(Error::InvalidParameter {
                        name: "beta",
                        reason: format!("shape parameters a={a}, b={b} must be positive"),
                    });
                }
            }
            SamplerFamily::DiracMix { .. } => {}
        }
        Ok(Self { family, n, seed })
    }

    /// Same spec with a different seed; used for independent streams.
    pub fn reseeded(&self, seed: u64) -> Self {
        Self {
            family: self.family.clone(),
            n: self.n,
            seed,
        }
    }
}

/// Materialize the spec as an equal-weight mixture of `n` atoms (θ, 1−θ),
/// deterministic under the seed. The Dirac-mix family returns its exact
/// mixture regardless of `n`.
pub fn sample_q(spec: &SamplerSpec) -> Result<AtomMixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let thetas: Vec<f64> = match &spec.family {
        SamplerFamily::DiracMix { lambdas } => {
            return AtomMixture::dirac_mixture(lambdas);
        }
        SamplerFamily::UniformInterval { lo, hi } => {
            let width = hi - lo;
            // lo + width·u keeps the underlying u stream identical across
            // intervals of equal width, so equal-width families share their
            // dispersion under common random numbers.
            (0..spec.n)
                .map(|_| lo + width * rng.random::<f64>())
                .collect()
        }
        SamplerFamily::TruncatedGaussian { mu, sigma } => {
            let normal = Normal::new(*mu, *sigma).expect("validated at construction");
            (0..spec.n)
                .map(|_| loop {
                    let x: f64 = normal.sample(&mut rng);
                    if (0.0..=1.0).contains(&x) {
                        break x;
                    }
                })
                .collect()
        }
        SamplerFamily::Beta { a, b } => {
            let beta = BetaDist::new(*a, *b).expect("validated at construction");
            (0..spec.n).map(|_| beta.sample(&mut rng)).collect()
        }
    };
    let atoms = thetas
        .into_iter()
        .map(|t| Categorical::new(vec![t, 1.0 - t]))
        .collect::<Result<Vec<_>>>()?;
    let weights = vec![1.0 / spec.n as f64; spec.n];
    AtomMixture::new(atoms, weights)
}

/// Draw `n` equal-weight atoms from a Dirichlet second-order distribution
/// of any dimension, via normalized independent Gamma draws.
/// Deterministic under the seed.
pub fn sample_dirichlet(q: &DirichletQ, n: usize, seed: u64) -> Result<AtomMixture> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "sample count must be at least 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gammas: Vec<Gamma<f64>> = q
        .alpha()
        .iter()
        .map(|&a| Gamma::new(a, 1.0).expect("alpha validated at construction"))
        .collect();
    let atoms = (0..n)
        .map(|_| {
            let mut draw: Vec<f64> = gammas.iter().map(|g| g.sample(&mut rng)).collect();
            let sum: f64 = draw.iter().sum();
            for v in draw.iter_mut() {
                *v /= sum;
            }
            Categorical::new(draw)
        })
        .collect::<Result<Vec<_>>>()?;
    AtomMixture::new(atoms, vec![1.0 / n as f64; n])
}

/// Closed-form label-wise moments of a Dirichlet second-order distribution:
///
/// ```text
/// tu_k = α_k (α_0 − α_k) / α_0²
/// au_k = α_k (α_0 − α_k) / (α_0 (α_0 + 1))
/// eu_k = α_k (α_0 − α_k) / (α_0² (α_0 + 1))
/// ```
///
/// The identity `tu_k = au_k + eu_k` holds algebraically.
///
/// ```
/// use varuq::oracles::dirichlet_moments;
/// use varuq::simplex::DirichletQ;
///
/// let flat = DirichletQ::new(vec![1.0, 1.0])?;
/// let t = dirichlet_moments(&flat).per_label()[0];
/// assert!((t.au - 1.0 / 6.0).abs() < 1e-15);
/// assert!((t.eu - 1.0 / 12.0).abs() < 1e-15);
/// # Ok::<(), varuq::Error>(())
/// ```
pub fn dirichlet_moments(q: &DirichletQ) -> LabelwiseTriple {
    let total = q.total();
    let per_label = q
        .alpha()
        .iter()
        .map(|&a| {
            let num = a * (total - a);
            LabelTriple {
                tu: num / (total * total),
                au: num / (total * (total + 1.0)),
                eu: num / (total * total * (total + 1.0)),
            }
        })
        .collect();
    LabelwiseTriple::from_parts(per_label)
}

/// Identifier of one uncertainty measure from either family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureId {
    TuEnt,
    AuEnt,
    EuEnt,
    TuVar,
    AuVar,
    EuVar,
}

impl MeasureId {
    pub const ALL: [MeasureId; 6] = [
        MeasureId::TuEnt,
        MeasureId::AuEnt,
        MeasureId::EuEnt,
        MeasureId::TuVar,
        MeasureId::AuVar,
        MeasureId::EuVar,
    ];

    pub fn is_variance(&self) -> bool {
        matches!(self, MeasureId::TuVar | MeasureId::AuVar | MeasureId::EuVar)
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MeasureId::TuEnt => "tu_ent",
            MeasureId::AuEnt => "au_ent",
            MeasureId::EuEnt => "eu_ent",
            MeasureId::TuVar => "tu_var",
            MeasureId::AuVar => "au_var",
            MeasureId::EuVar => "eu_var",
        };
        f.write_str(s)
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tu_ent" => Ok(MeasureId::TuEnt),
            "au_ent" => Ok(MeasureId::AuEnt),
            "eu_ent" => Ok(MeasureId::EuEnt),
            "tu_var" => Ok(MeasureId::TuVar),
            "au_var" => Ok(MeasureId::AuVar),
            "eu_var" => Ok(MeasureId::EuVar),
            other => Err(Error::UnknownMeasure(other.to_string())),
        }
    }
}

/// Number of independent seed streams behind every Monte Carlo estimate.
pub const MC_STREAMS: usize = 10;

/// A Monte Carlo estimate: the mean over [`MC_STREAMS`] independent seed
/// streams, its standard error, and the per-stream values.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub per_stream: Vec<f64>,
}

/// Estimate an arbitrary functional of the sampled mixture over
/// [`MC_STREAMS`] independent streams. Streams evaluate in parallel with
/// per-stream generators, so the result is identical under any scheduling.
pub fn mc_estimate_with<F>(spec: &SamplerSpec, f: F) -> Result<McEstimate>
where
    F: Fn(&AtomMixture) -> f64 + Sync + Send,
{
    // sample and evaluate inside the worker so only scalars are collected
    let results: Vec<Result<f64>> = par::map_indices(MC_STREAMS, |s| {
        let q = sample_q(&spec.reseeded(derive_seed(spec.seed, s as u64)))?;
        Ok(f(&q))
    });
    let per_stream = results.into_iter().collect::<Result<Vec<f64>>>()?;
    let (mean, std_error) = mean_and_std_error(&per_stream);
    Ok(McEstimate {
        mean,
        std_error,
        per_stream,
    })
}

/// Estimate a named measure of the sampled second-order distribution.
///
/// Entropy measures are the scalar triple components in bits. Variance
/// measures are reported label-wise for the Bernoulli parameter (label 0);
/// on two labels both labels carry the same value by symmetry.
pub fn mc_estimate(measure: MeasureId, spec: &SamplerSpec) -> Result<McEstimate> {
    mc_estimate_with(spec, move |q| evaluate_measure(measure, q))
}

fn evaluate_measure(measure: MeasureId, q: &AtomMixture) -> f64 {
    match measure {
        MeasureId::TuEnt | MeasureId::AuEnt | MeasureId::EuEnt => {
            let t = entropy_triple(q);
            match measure {
                MeasureId::TuEnt => t.tu,
                MeasureId::AuEnt => t.au,
                _ => t.eu,
            }
        }
        MeasureId::TuVar | MeasureId::AuVar | MeasureId::EuVar => {
            let t = labelwise(q).per_label()[0];
            match measure {
                MeasureId::TuVar => t.tu,
                MeasureId::AuVar => t.au,
                _ => t.eu,
            }
        }
    }
}

/// Maximize `V(θ) = Σ w_k θ_k (1 − θ_k)` over a simplex lattice with the
/// given per-axis resolution, then refine with coordinate-descent sweeps
/// (each pairwise move maximizes V along that direction analytically).
///
/// This is the independent check of the closed-form maximizer; it never
/// consults it. K above 5 is rejected (combinatorial lattice), and the
/// resolution must be at least 100 per axis for K ≤ 4 (50 for K = 5).
pub fn grid_maximize(w: &WeightVector, resolution: usize) -> Result<Categorical> {
    let k = w.len();
    if k < 2 {
        return Err(Error::TooFewEntries { min: 2, got: k });
    }
    if k > 5 {
        return Err(Error::InvalidParameter {
            name: "weights",
            reason: format!("grid search supports at most 5 labels, got {k}"),
        });
    }
    let min_resolution = if k <= 4 { 100 } else { 50 };
    if resolution < min_resolution {
        return Err(Error::InvalidParameter {
            name: "resolution",
            reason: format!("need at least {min_resolution} per axis for {k} labels"),
        });
    }
    let ws = w.as_slice();

    // lattice pass: all compositions of `resolution` into k parts
    let mut best = vec![0.0; k];
    let mut best_v = f64::NEG_INFINITY;
    let mut point = vec![0.0; k];
    let mut counts = vec![0usize; k];
    enumerate_compositions(resolution, k, 0, &mut counts, &mut |counts| {
        for (i, &c) in counts.iter().enumerate() {
            point[i] = c as f64 / resolution as f64;
        }
        let v = concavity_value_raw(&point, ws);
        if v > best_v {
            best_v = v;
            best.copy_from_slice(&point);
        }
    });

    // coordinate-descent sweeps over label pairs
    for _ in 0..200 {
        let mut improved = 0.0;
        for a in 0..k {
            for b in (a + 1)..k {
                // maximize V along theta_a += t, theta_b -= t
                let t = (ws[a] * (1.0 - 2.0 * best[a]) - ws[b] * (1.0 - 2.0 * best[b]))
                    / (2.0 * (ws[a] + ws[b]));
                let lo = (-best[a]).max(best[b] - 1.0);
                let hi = (1.0 - best[a]).min(best[b]);
                let t = t.clamp(lo, hi);
                if t == 0.0 {
                    continue;
                }
                let before = ws[a] * best[a] * (1.0 - best[a]) + ws[b] * best[b] * (1.0 - best[b]);
                let (na, nb) = (best[a] + t, best[b] - t);
                let after = ws[a] * na * (1.0 - na) + ws[b] * nb * (1.0 - nb);
                if after > before {
                    best[a] = na;
                    best[b] = nb;
                    improved += after - before;
                }
            }
        }
        if improved < 1e-16 {
            break;
        }
    }
    Categorical::new(best)
}

fn enumerate_compositions<F: FnMut(&[usize])>(
    remaining: usize,
    k: usize,
    index: usize,
    counts: &mut Vec<usize>,
    visit: &mut F,
) {
    if index == k - 1 {
        counts[index] = remaining;
        visit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[index] = c;
        enumerate_compositions(remaining - c, k, index + 1, counts, visit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dirac_mix_spec_is_exact() {
        let spec = SamplerSpec::new(
            SamplerFamily::DiracMix {
                lambdas: vec![0.5, 0.5],
            },
            1,
            0,
        )
        .unwrap();
        let q = sample_q(&spec).unwrap();
        assert_eq!(q, AtomMixture::dirac_mixture(&[0.5, 0.5]).unwrap());
    }

    #[test]
    fn uniform_interval_dispersion_approaches_one_twelfth() {
        // Var of a uniform on [0, 1] is 1/12.
        let spec = SamplerSpec::new(
            SamplerFamily::UniformInterval { lo: 0.0, hi: 1.0 },
            200_000,
            21,
        )
        .unwrap();
        let q = sample_q(&spec).unwrap();
        let eu = labelwise(&q).per_label()[0].eu;
        assert_abs_diff_eq!(eu, 1.0 / 12.0, epsilon = 2e-3);
    }

    #[test]
    fn equal_width_intervals_share_their_dispersion_under_common_numbers() {
        let seed = 4242;
        let a = sample_q(
            &SamplerSpec::new(
                SamplerFamily::UniformInterval { lo: 0.3, hi: 0.7 },
                4096,
                seed,
            )
            .unwrap(),
        )
        .unwrap();
        let b = sample_q(
            &SamplerSpec::new(
                SamplerFamily::UniformInterval { lo: 0.6, hi: 1.0 },
                4096,
                seed,
            )
            .unwrap(),
        )
        .unwrap();
        // atoms are translates up to final-rounding ulps
        for (x, y) in a.atoms().iter().zip(b.atoms()) {
            assert_abs_diff_eq!(x.probs()[0] + 0.3, y.probs()[0], epsilon = 1e-15);
        }
        let eu_a = labelwise(&a).per_label()[0].eu;
        let eu_b = labelwise(&b).per_label()[0].eu;
        assert_abs_diff_eq!(eu_a, eu_b, epsilon = 1e-15);
    }

    #[test]
    fn truncated_gaussian_stays_inside_the_unit_interval() {
        let spec = SamplerSpec::new(
            SamplerFamily::TruncatedGaussian {
                mu: 0.5,
                sigma: 0.1,
            },
            5000,
            3,
        )
        .unwrap();
        let q = sample_q(&spec).unwrap();
        for atom in q.atoms() {
            let t = atom.probs()[0];
            assert!((0.0..=1.0).contains(&t));
        }
    }

    #[test]
    fn sampling_is_deterministic_under_the_seed() {
        let spec = SamplerSpec::new(SamplerFamily::Beta { a: 8.0, b: 2.0 }, 64, 11).unwrap();
        assert_eq!(sample_q(&spec).unwrap(), sample_q(&spec).unwrap());
    }

    #[test]
    fn spec_validation_rejects_bad_parameters() {
        assert!(
            SamplerSpec::new(SamplerFamily::UniformInterval { lo: 0.7, hi: 0.3 }, 10, 0).is_err()
        );
        assert!(SamplerSpec::new(SamplerFamily::Beta { a: 0.0, b: 1.0 }, 10, 0).is_err());
        assert!(SamplerSpec::new(
            SamplerFamily::TruncatedGaussian {
                mu: 0.5,
                sigma: 0.0
            },
            10,
            0
        )
        .is_err());
        assert!(
            SamplerSpec::new(SamplerFamily::UniformInterval { lo: 0.0, hi: 1.0 }, 0, 0).is_err()
        );
    }

    #[test]
    fn dirichlet_sampler_recovers_the_mean() {
        // Monte Carlo mean against alpha_k / alpha_0 within a 3-sigma band
        // (per-coordinate standard error from the closed-form variance).
        let q = DirichletQ::new(vec![2.0, 8.0]).unwrap();
        let n = 100_000;
        let mixture = sample_dirichlet(&q, n, 13).unwrap();
        let moments = dirichlet_moments(&q);
        for ((got, want), t) in mixture
            .mean()
            .probs()
            .iter()
            .zip(q.mean().probs())
            .zip(moments.per_label())
        {
            let band = 3.0 * (t.eu / n as f64).sqrt();
            assert_abs_diff_eq!(got, want, epsilon = band);
        }
        assert_eq!(q.mean().probs(), &[0.2, 0.8]);
    }

    #[test]
    fn flat_dirichlet_moments_match_the_standard_values() {
        // Beta(1, 1) moments: Var(Y) = 1/4, E[θ(1−θ)] = 1/6, Var(θ) = 1/12.
        let q = DirichletQ::new(vec![1.0, 1.0]).unwrap();
        let m = dirichlet_moments(&q);
        let t = m.per_label()[0];
        assert_abs_diff_eq!(t.tu, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(t.au, 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.eu, 1.0 / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn skewed_dirichlet_moments() {
        let q = DirichletQ::new(vec![8.0, 2.0]).unwrap();
        let t = dirichlet_moments(&q).per_label()[0];
        assert_abs_diff_eq!(t.tu, 0.16, epsilon = 1e-15);
        assert_abs_diff_eq!(t.au, 16.0 / 110.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.eu, 16.0 / 1100.0, epsilon = 1e-15);
    }

    #[test]
    fn concentrated_dirichlet_has_vanishing_dispersion() {
        let c = 1e6;
        let q = DirichletQ::new(vec![c, c, c]).unwrap();
        for t in dirichlet_moments(&q).per_label() {
            assert!(t.eu < 1e-5);
            assert_abs_diff_eq!(t.tu, t.au + t.eu, epsilon = 1e-15);
        }
    }

    #[test]
    fn mc_estimate_of_dirac_mix_is_exact() {
        let spec = SamplerSpec::new(
            SamplerFamily::DiracMix {
                lambdas: vec![0.5, 0.5],
            },
            100,
            5,
        )
        .unwrap();
        let est = mc_estimate(MeasureId::AuEnt, &spec).unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn mc_estimate_recovers_beta_dispersion() {
        let spec = SamplerSpec::new(SamplerFamily::Beta { a: 8.0, b: 2.0 }, 100_000, 17).unwrap();
        let est = mc_estimate(MeasureId::EuVar, &spec).unwrap();
        let truth = 16.0 / 1100.0;
        assert!(
            (est.mean - truth).abs() <= 3.0 * est.std_error,
            "mean {} not within 3 s.e. ({}) of {}",
            est.mean,
            est.std_error,
            truth
        );
    }

    #[test]
    fn mc_estimate_of_symmetric_total_entropy_is_one_bit() {
        // the mean of a symmetric sampler is the uniform distribution
        let spec = SamplerSpec::new(
            SamplerFamily::UniformInterval { lo: 0.0, hi: 1.0 },
            50_000,
            23,
        )
        .unwrap();
        let est = mc_estimate(MeasureId::TuEnt, &spec).unwrap();
        assert!((est.mean - 1.0).abs() <= 3.0 * est.std_error + 1e-6);
    }

    #[test]
    fn measure_ids_round_trip_through_strings() {
        for id in MeasureId::ALL {
            assert_eq!(id.to_string().parse::<MeasureId>().unwrap(), id);
        }
        assert!("tu".parse::<MeasureId>().is_err());
    }

    #[test]
    fn grid_finds_the_barycenter_for_unit_weights() {
        let beta = grid_maximize(&WeightVector::unit(3), 100).unwrap();
        for &b in beta.probs() {
            assert_abs_diff_eq!(b, 1.0 / 3.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn grid_agrees_with_the_skewed_closed_form() {
        let w = WeightVector::new(vec![1.0, 1.0, 2.0]).unwrap();
        let beta = grid_maximize(&w, 100).unwrap();
        assert_abs_diff_eq!(beta.probs()[0], 0.3, epsilon = 1e-4);
        assert_abs_diff_eq!(beta.probs()[1], 0.3, epsilon = 1e-4);
        assert_abs_diff_eq!(beta.probs()[2], 0.4, epsilon = 1e-4);
    }

    #[test]
    fn binary_grid_maximizer_is_the_center() {
        let w = WeightVector::new(vec![3.0, 0.2]).unwrap();
        let beta = grid_maximize(&w, 128).unwrap();
        assert_abs_diff_eq!(beta.probs()[0], 0.5, epsilon = 1e-9);
    }

    #[test]
    fn grid_rejects_large_label_counts_and_coarse_lattices() {
        assert!(grid_maximize(&WeightVector::unit(6), 100).is_err());
        assert!(grid_maximize(&WeightVector::unit(3), 50).is_err());
    }
}
