//! Machine-checkable verdicts on the axioms an uncertainty measure should
//! satisfy, evaluated for either measure family over seeded random cases.
//!
//! The checked properties, identified as A0–A7 (A2 has an informational
//! probe instead of a verdict, see [`a2_probe`]):
//!
//! - A0: total, aleatoric, and epistemic values are nonnegative.
//! - A1: epistemic uncertainty vanishes exactly on Dirac measures and is
//!   strictly positive on any non-degenerate mixture.
//! - A3: a mean-preserving spread strictly increases epistemic uncertainty
//!   (variance family; weakly for entropy) and leaves total uncertainty —
//!   a functional of the preserved mean in both families — unchanged.
//! - A4: a spread-preserving shift of the mean toward the barycenter
//!   strictly increases aleatoric and total uncertainty (equal weights).
//! - A5: a spread-preserving location shift leaves epistemic uncertainty
//!   unchanged. The entropy family violates this; its violation count is
//!   reported, not asserted zero.
//! - A6: mixtures of Dirac measures on vertex distributions have exactly
//!   zero aleatoric uncertainty.
//! - A7: under a partition of the labels, the variance measures split
//!   additively over unrenormalized restrictions (equality); the entropy
//!   measures are subadditive over rest-bucket coarsenings (inequality).
//!
//! Every case derives its own seed from the report seed, so any parallel
//! schedule reproduces the identical report.

use crate::entropy::entropy_triple;
use crate::error::{Error, Result};
use crate::math::derive_seed;
use crate::oracles::{sample_q, SamplerFamily, SamplerSpec};
use crate::par;
use crate::simplex::{AtomMixture, Categorical, WeightVector};
use crate::transforms::{location_shift, mean_preserving_spread, SpreadSpec};
use crate::variance::{aggregate, labelwise, labelwise_subset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use std::fmt;
use std::str::FromStr;

/// Margin separating float noise from violation on exact-arithmetic claims.
const STRICT_MARGIN: f64 = 1e-12;
/// Margin where logarithms or Monte Carlo intervene.
const LOOSE_MARGIN: f64 = 1e-10;

/// The two measure families under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureFamily {
    Variance,
    Entropy,
}

impl fmt::Display for MeasureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureFamily::Variance => "variance",
            MeasureFamily::Entropy => "entropy",
        })
    }
}

impl FromStr for MeasureFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "variance" | "var" => Ok(MeasureFamily::Variance),
            "entropy" | "ent" => Ok(MeasureFamily::Entropy),
            other => Err(Error::UnknownMeasure(other.to_string())),
        }
    }
}

/// Identifier of a checkable axiom. `MpsWeak` is the weak spread-monotonicity
/// statement for the entropy family, produced by
/// [`check_proposition_mps_entropy`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomId {
    A0,
    A1,
    A3,
    A4,
    A5,
    A6,
    A7,
    MpsWeak,
}

impl AxiomId {
    /// The axioms [`check_axiom`] accepts, in canonical order.
    pub const CHECKABLE: [AxiomId; 7] = [
        AxiomId::A0,
        AxiomId::A1,
        AxiomId::A3,
        AxiomId::A4,
        AxiomId::A5,
        AxiomId::A6,
        AxiomId::A7,
    ];

    fn tag(self) -> u64 {
        match self {
            AxiomId::A0 => 0,
            AxiomId::A1 => 1,
            AxiomId::A3 => 3,
            AxiomId::A4 => 4,
            AxiomId::A5 => 5,
            AxiomId::A6 => 6,
            AxiomId::A7 => 7,
            AxiomId::MpsWeak => 8,
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomId::A0 => "A0",
            AxiomId::A1 => "A1",
            AxiomId::A3 => "A3",
            AxiomId::A4 => "A4",
            AxiomId::A5 => "A5",
            AxiomId::A6 => "A6",
            AxiomId::A7 => "A7",
            AxiomId::MpsWeak => "mps_weak",
        })
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A0" | "a0" => Ok(AxiomId::A0),
            "A1" | "a1" => Ok(AxiomId::A1),
            "A3" | "a3" => Ok(AxiomId::A3),
            "A4" | "a4" => Ok(AxiomId::A4),
            "A5" | "a5" => Ok(AxiomId::A5),
            "A6" | "a6" => Ok(AxiomId::A6),
            "A7" | "a7" => Ok(AxiomId::A7),
            "mps_weak" => Ok(AxiomId::MpsWeak),
            other => Err(Error::UnknownAxiom(other.to_string())),
        }
    }
}

/// Random-case generator settings: label counts in `[k_min, k_max]`, atom
/// counts in `[1, max_atoms]`, atoms drawn from the flat Dirichlet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub cases: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub max_atoms: usize,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            cases: 1000,
            k_min: 2,
            k_max: 6,
            max_atoms: 16,
            seed: 0x5EED,
        }
    }
}

impl GeneratorConfig {
    fn validate(&self) -> Result<()> {
        if self.cases == 0 {
            return Err(Error::InvalidParameter {
                name: "cases",
                reason: "need at least one case".into(),
            });
        }
        if self.k_min < 2 || self.k_max < self.k_min {
            return Err(Error::InvalidParameter {
                name: "k_range",
                reason: format!(
                    "[{}, {}] is not a valid label range",
                    self.k_min, self.k_max
                ),
            });
        }
        if self.max_atoms == 0 {
            return Err(Error::InvalidParameter {
                name: "max_atoms",
                reason: "need at least one atom".into(),
            });
        }
        Ok(())
    }
}

/// Outcome of one axiom/family check over a batch of seeded cases.
///
/// `worst_margin` is the smallest observed slack relative to the axiom's
/// threshold; a case passes when its slack is nonnegative, so
/// `violations` counts cases with negative slack.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub family: MeasureFamily,
    pub cases_run: usize,
    pub violations: usize,
    pub skipped: usize,
    pub worst_margin: f64,
    pub seed: u64,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "axiom={} family={} cases={} violations={} skipped={} worst_margin={:e} seed={}",
            self.axiom,
            self.family,
            self.cases_run,
            self.violations,
            self.skipped,
            self.worst_margin,
            self.seed
        )
    }
}

enum Outcome {
    Checked(f64),
    Skipped,
}

/// Check one axiom for one family over `config.cases` seeded cases.
pub fn check_axiom(
    axiom: AxiomId,
    family: MeasureFamily,
    config: &GeneratorConfig,
) -> Result<AxiomReport> {
    if axiom == AxiomId::MpsWeak {
        return Err(Error::UnknownAxiom(
            "mps_weak is checked by check_proposition_mps_entropy".into(),
        ));
    }
    run_batch(axiom, family, config)
}

/// Check that entropy epistemic uncertainty never decreases under a
/// mean-preserving spread, at the loose margin.
pub fn check_proposition_mps_entropy(config: &GeneratorConfig) -> Result<AxiomReport> {
    run_batch(AxiomId::MpsWeak, MeasureFamily::Entropy, config)
}

fn run_batch(
    axiom: AxiomId,
    family: MeasureFamily,
    config: &GeneratorConfig,
) -> Result<AxiomReport> {
    config.validate()?;
    let family_bit = match family {
        MeasureFamily::Variance => 0u64,
        MeasureFamily::Entropy => 1u64,
    };
    let batch_seed = derive_seed(config.seed, axiom.tag() << 1 | family_bit);
    let outcomes = par::map_indices(config.cases, |i| {
        evaluate_case(axiom, family, config, i, derive_seed(batch_seed, i as u64))
    });
    let mut cases_run = 0;
    let mut violations = 0;
    let mut skipped = 0;
    let mut worst = f64::INFINITY;
    for outcome in outcomes {
        match outcome {
            Outcome::Checked(slack) => {
                cases_run += 1;
                if slack < 0.0 {
                    violations += 1;
                }
                if slack < worst {
                    worst = slack;
                }
            }
            Outcome::Skipped => skipped += 1,
        }
    }
    Ok(AxiomReport {
        axiom,
        family,
        cases_run,
        violations,
        skipped,
        worst_margin: worst,
        seed: config.seed,
    })
}

// ---------------------------------------------------------------------------
// case generation
// ---------------------------------------------------------------------------

fn flat_simplex_point(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let sum: f64 = p.iter().sum();
    for v in p.iter_mut() {
        *v /= sum;
    }
    p
}

/// Pull a point 1% of the way toward the barycenter, bounding coordinates
/// away from the boundary so transform-based cases have feasible room.
fn smooth_point(p: &mut [f64]) {
    let k = p.len() as f64;
    for v in p.iter_mut() {
        *v = 0.99 * *v + 0.01 / k;
    }
}

fn random_mixture(rng: &mut ChaCha8Rng, config: &GeneratorConfig, smoothed: bool) -> AtomMixture {
    let k = rng.random_range(config.k_min..=config.k_max);
    let m = rng.random_range(1..=config.max_atoms);
    let atoms: Vec<Categorical> = (0..m)
        .map(|_| {
            let mut p = flat_simplex_point(rng, k);
            if smoothed {
                smooth_point(&mut p);
            }
            Categorical::new(p).expect("generated point is on the simplex")
        })
        .collect();
    let weights = if m == 1 {
        vec![1.0]
    } else {
        flat_simplex_point(rng, m)
    };
    AtomMixture::new(atoms, weights).expect("generated mixture is valid")
}

fn sum_zero_direction(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    loop {
        let mut d: Vec<f64> = (0..k)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
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

/// Largest s such that every atom plus `s·z` stays on the simplex.
fn feasible_scale(q: &AtomMixture, z: &[f64]) -> f64 {
    let mut s = f64::INFINITY;
    for atom in q.atoms() {
        for (x, dz) in atom.probs().iter().zip(z) {
            if *dz > 0.0 {
                s = s.min((1.0 - x) / dz);
            } else if *dz < 0.0 {
                s = s.min(x / -dz);
            }
        }
    }
    if s.is_finite() {
        s
    } else {
        0.0
    }
}

fn max_abs(z: &[f64]) -> f64 {
    z.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

// ---------------------------------------------------------------------------
// measure access
// ---------------------------------------------------------------------------

fn family_triple(family: MeasureFamily, q: &AtomMixture) -> (f64, f64, f64) {
    match family {
        MeasureFamily::Variance => {
            let agg = aggregate(q, &WeightVector::unit(q.num_labels()), false)
                .expect("unit weights match the mixture");
            (agg.tu, agg.au, agg.eu)
        }
        MeasureFamily::Entropy => {
            let t = entropy_triple(q);
            (t.tu, t.au, t.eu)
        }
    }
}

/// Coarsen a mixture onto a label subset plus a rest bucket holding the
/// complement's mass: the marginal a proper distribution needs.
fn coarsen(q: &AtomMixture, labels: &[usize]) -> AtomMixture {
    let k = q.num_labels();
    let atoms: Vec<Categorical> = q
        .atoms()
        .iter()
        .map(|atom| {
            let mut coarse: Vec<f64> = labels.iter().map(|&l| atom.probs()[l]).collect();
            let rest: f64 = (0..k)
                .filter(|l| !labels.contains(l))
                .map(|l| atom.probs()[l])
                .sum();
            coarse.push(rest);
            Categorical::new(coarse).expect("coarsened atom is on the simplex")
        })
        .collect();
    AtomMixture::new(atoms, q.weights().to_vec()).expect("weights unchanged")
}

// ---------------------------------------------------------------------------
// per-axiom cases
// ---------------------------------------------------------------------------

fn evaluate_case(
    axiom: AxiomId,
    family: MeasureFamily,
    config: &GeneratorConfig,
    index: usize,
    case_seed: u64,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
    match axiom {
        AxiomId::A0 => {
            let q = random_mixture(&mut rng, config, false);
            let (tu, au, eu) = family_triple(family, &q);
            let mut min_val = tu.min(au).min(eu);
            if family == MeasureFamily::Variance {
                for t in labelwise(&q).per_label() {
                    min_val = min_val.min(t.tu).min(t.au).min(t.eu);
                }
            }
            Outcome::Checked(min_val + STRICT_MARGIN)
        }
        AxiomId::A1 => {
            if index.is_multiple_of(2) {
                // Dirac, possibly split into identical atoms
                let k = rng.random_range(config.k_min..=config.k_max);
                let theta = Categorical::new(flat_simplex_point(&mut rng, k))
                    .expect("point is on the simplex");
                let copies = rng.random_range(1..=4usize);
                let weights = if copies == 1 {
                    vec![1.0]
                } else {
                    flat_simplex_point(&mut rng, copies)
                };
                let q = AtomMixture::new(vec![theta; copies], weights)
                    .expect("identical atoms form a valid mixture");
                let (_, _, eu) = family_triple(family, &q);
                Outcome::Checked(STRICT_MARGIN - eu)
            } else {
                // non-degenerate: at least two atoms separated by 1e-3
                let k = rng.random_range(config.k_min..=config.k_max);
                let m = rng.random_range(2..=config.max_atoms.max(2));
                let mut atoms = Vec::new();
                for _ in 0..50 {
                    atoms = (0..m)
                        .map(|_| flat_simplex_point(&mut rng, k))
                        .collect::<Vec<_>>();
                    let spread_enough = atoms.iter().enumerate().any(|(i, a)| {
                        atoms[..i]
                            .iter()
                            .any(|b| a.iter().zip(b).any(|(x, y)| (x - y).abs() >= 1e-3))
                    });
                    if spread_enough {
                        break;
                    }
                }
                let atoms: Vec<Categorical> = atoms
                    .into_iter()
                    .map(|p| Categorical::new(p).expect("point is on the simplex"))
                    .collect();
                // bound weights away from zero so every atom matters
                let mut weights = flat_simplex_point(&mut rng, m);
                let mk = m as f64;
                for w in weights.iter_mut() {
                    *w = 0.9 * *w + 0.1 / mk;
                }
                let q = AtomMixture::new(atoms, weights).expect("valid mixture");
                let (_, _, eu) = family_triple(family, &q);
                Outcome::Checked(eu - STRICT_MARGIN)
            }
        }
        AxiomId::A3 | AxiomId::MpsWeak => {
            let q = random_mixture(&mut rng, config, true);
            let epsilon = rng.random_range(0.25..=1.0);
            let spec = SpreadSpec::new(epsilon, derive_seed(case_seed, 1))
                .expect("epsilon validated by range");
            let spread = match mean_preserving_spread(&q, &spec) {
                Ok(s) => s,
                Err(_) => return Outcome::Skipped,
            };
            let (tu0, _, eu0) = family_triple(family, &q);
            let (tu1, _, eu1) = family_triple(family, &spread);
            // total uncertainty is a functional of the preserved mean, so
            // it can only be checked as unchanged-within-noise
            let tu_slack = LOOSE_MARGIN - (tu1 - tu0).abs();
            let eu_slack = match (axiom, family) {
                (AxiomId::A3, MeasureFamily::Variance) => (eu1 - eu0) - STRICT_MARGIN,
                _ => (eu1 - eu0) + LOOSE_MARGIN,
            };
            Outcome::Checked(eu_slack.min(tu_slack))
        }
        AxiomId::A4 => {
            let q = random_mixture(&mut rng, config, true);
            let k = q.num_labels();
            let mean = q.mean();
            let target = Categorical::uniform(k).expect("k >= 2");
            let gap = mean
                .probs()
                .iter()
                .zip(target.probs())
                .fold(0.0f64, |acc, (m, t)| acc.max((m - t).abs()));
            if gap < 1e-3 {
                return Outcome::Skipped;
            }
            let lambda = rng.random_range(0.2..0.8);
            let z0: Vec<f64> = target
                .probs()
                .iter()
                .zip(mean.probs())
                .map(|(t, m)| (1.0 - lambda) * (t - m))
                .collect();
            let scale = (0.9 * feasible_scale(&q, &z0)).min(1.0);
            let z: Vec<f64> = z0.iter().map(|v| v * scale).collect();
            if max_abs(&z) < 1e-6 {
                return Outcome::Skipped;
            }
            let shifted = match location_shift(&q, &z) {
                Ok(s) => s,
                Err(_) => return Outcome::Skipped,
            };
            let (tu0, au0, _) = family_triple(family, &q);
            let (tu1, au1, _) = family_triple(family, &shifted);
            Outcome::Checked((au1 - au0).min(tu1 - tu0) - STRICT_MARGIN)
        }
        AxiomId::A5 => {
            let (q, z) = if index == 0 {
                // canonical pair: a width-0.4 uniform band shifted by 0.3
                let spec = SamplerSpec::new(
                    SamplerFamily::UniformInterval { lo: 0.3, hi: 0.7 },
                    256,
                    derive_seed(case_seed, 2),
                )
                .expect("valid spec");
                let q = sample_q(&spec).expect("sampling cannot fail");
                (q, vec![0.3, -0.3])
            } else {
                let q = random_mixture(&mut rng, config, true);
                let dir = sum_zero_direction(&mut rng, q.num_labels());
                let scale = rng.random_range(0.1..=1.0) * 0.9 * feasible_scale(&q, &dir);
                let z: Vec<f64> = dir.iter().map(|v| v * scale).collect();
                (q, z)
            };
            if max_abs(&z) < 1e-12 {
                return Outcome::Skipped;
            }
            let shifted = match location_shift(&q, &z) {
                Ok(s) => s,
                Err(_) => return Outcome::Skipped,
            };
            let (_, _, eu0) = family_triple(family, &q);
            let (_, _, eu1) = family_triple(family, &shifted);
            Outcome::Checked(STRICT_MARGIN - (eu1 - eu0).abs())
        }
        AxiomId::A6 => {
            let k = rng.random_range(config.k_min..=config.k_max);
            let lambdas = flat_simplex_point(&mut rng, k);
            let q = AtomMixture::dirac_mixture(&lambdas).expect("valid lambdas");
            let (_, au, _) = family_triple(family, &q);
            // exact-zero requirement; + 0.0 folds a negative zero away
            Outcome::Checked(-au + 0.0)
        }
        AxiomId::A7 => {
            let q = random_mixture(&mut rng, config, false);
            let k = q.num_labels();
            let mask = rng.random_range(1..(1u64 << k) - 1);
            let part1: Vec<usize> = (0..k).filter(|l| mask >> l & 1 == 1).collect();
            let part2: Vec<usize> = (0..k).filter(|l| mask >> l & 1 == 0).collect();
            match family {
                MeasureFamily::Variance => {
                    let total = labelwise(&q);
                    let sub1 = labelwise_subset(&q, &part1).expect("labels in range");
                    let sub2 = labelwise_subset(&q, &part2).expect("labels in range");
                    let sum3 = |lw: &crate::variance::LabelwiseTriple| {
                        lw.per_label().iter().fold((0.0, 0.0, 0.0), |acc, t| {
                            (acc.0 + t.tu, acc.1 + t.au, acc.2 + t.eu)
                        })
                    };
                    let (tu, au, eu) = sum3(&total);
                    let (tu1, au1, eu1) = sum3(&sub1);
                    let (tu2, au2, eu2) = sum3(&sub2);
                    let gap = (tu - (tu1 + tu2))
                        .abs()
                        .max((au - (au1 + au2)).abs())
                        .max((eu - (eu1 + eu2)).abs());
                    Outcome::Checked(STRICT_MARGIN - gap)
                }
                MeasureFamily::Entropy => {
                    let total = entropy_triple(&q);
                    let t1 = entropy_triple(&coarsen(&q, &part1));
                    let t2 = entropy_triple(&coarsen(&q, &part2));
                    let slack = (t1.tu + t2.tu - total.tu)
                        .min(t1.au + t2.au - total.au)
                        .min(t1.eu + t2.eu - total.eu);
                    Outcome::Checked(slack + LOOSE_MARGIN)
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// A2 probe
// ---------------------------------------------------------------------------

/// One family's values at (a sampled stand-in for) the uniform second-order
/// distribution versus the vertex-pair witness that exceeds it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct A2Probe {
    pub family: MeasureFamily,
    pub uniform_tu: f64,
    pub uniform_eu: f64,
    pub witness_tu: f64,
    pub witness_eu: f64,
}

/// Informational probe of maximality at the uniform second-order
/// distribution (two labels): reports values without a verdict. For both
/// families the vertex-pair witness carries strictly more epistemic
/// uncertainty than the uniform distribution, so neither family attains its
/// maximum there.
pub fn a2_probe(n: usize, seed: u64) -> Result<Vec<A2Probe>> {
    let uniform_q = sample_q(&SamplerSpec::new(
        SamplerFamily::UniformInterval { lo: 0.0, hi: 1.0 },
        n,
        seed,
    )?)?;
    let witness = AtomMixture::dirac_mixture(&[0.5, 0.5])?;
    let mut probes = Vec::with_capacity(2);
    for family in [MeasureFamily::Variance, MeasureFamily::Entropy] {
        let (u_tu, _, u_eu) = family_triple(family, &uniform_q);
        let (w_tu, _, w_eu) = family_triple(family, &witness);
        probes.push(A2Probe {
            family,
            uniform_tu: u_tu,
            uniform_eu: u_eu,
            witness_tu: w_tu,
            witness_eu: w_eu,
        });
    }
    Ok(probes)
}
