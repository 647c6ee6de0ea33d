//! Sampled label-wise moments converge to the closed-form Dirichlet
//! moments as the atom count grows.

use varuq::math::derive_seed;
use varuq::oracles::{dirichlet_moments, sample_q, SamplerFamily, SamplerSpec};
use varuq::simplex::DirichletQ;
use varuq::variance::labelwise;

/// Worst absolute error across the three components of label 0.
fn worst_error(n: usize, seed: u64, a: f64, b: f64) -> f64 {
    let truth = dirichlet_moments(&DirichletQ::new(vec![a, b]).unwrap());
    let t = truth.per_label()[0];
    let q = sample_q(&SamplerSpec::new(SamplerFamily::Beta { a, b }, n, seed).unwrap()).unwrap();
    let got = labelwise(&q).per_label()[0];
    (got.tu - t.tu)
        .abs()
        .max((got.au - t.au).abs())
        .max((got.eu - t.eu).abs())
}

#[test]
fn sampled_moments_tighten_with_the_sample_count() {
    let base = 2024u64;
    let mut medians = Vec::new();
    for n in [1_000usize, 10_000, 100_000] {
        let mut errors: Vec<f64> = (0..10)
            .map(|s| worst_error(n, derive_seed(base, s), 8.0, 2.0))
            .collect();
        errors.sort_by(f64::total_cmp);
        medians.push((errors[4] + errors[5]) / 2.0);
    }
    assert!(
        medians[0] > medians[1] && medians[1] > medians[2],
        "median errors should fall monotonically: {medians:?}"
    );
}
