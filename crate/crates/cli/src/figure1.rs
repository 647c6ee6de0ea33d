//! The six-panel reference table: both measure families evaluated on
//! canonical second-order distributions of a Bernoulli parameter, with
//! Monte Carlo standard errors over ten seed streams.
//!
//! All sampled panels share the seed-derivation scheme, so equal-width
//! uniform panels see common random numbers and their dispersion agrees
//! exactly rather than statistically.

use std::fmt::Write as _;
use varuq::error::Result;
use varuq::math::{derive_seed, mean_and_std_error};
use varuq::oracles::{sample_q, McEstimate, SamplerFamily, SamplerSpec, MC_STREAMS};
use varuq::simplex::WeightVector;
use varuq::variance::aggregate;

/// The panel set: uniform bands, a truncated Gaussian, a Beta, and the
/// vertex pair.
pub fn panels() -> Vec<(char, &'static str, SamplerFamily)> {
    vec![
        (
            'a',
            "U[0,1]",
            SamplerFamily::UniformInterval { lo: 0.0, hi: 1.0 },
        ),
        (
            'b',
            "N(0.5,0.1)",
            SamplerFamily::TruncatedGaussian {
                mu: 0.5,
                sigma: 0.1,
            },
        ),
        ('c', "Beta(8,2)", SamplerFamily::Beta { a: 8.0, b: 2.0 }),
        (
            'd',
            "U[0.3,0.7]",
            SamplerFamily::UniformInterval { lo: 0.3, hi: 0.7 },
        ),
        (
            'e',
            "U[0.6,1.0]",
            SamplerFamily::UniformInterval { lo: 0.6, hi: 1.0 },
        ),
        (
            'f',
            "(d0+d1)/2",
            SamplerFamily::DiracMix {
                lambdas: vec![0.5, 0.5],
            },
        ),
    ]
}

/// One panel's estimates: entropy triple in bits and the variance triple
/// normalized to [0, 1], each ordered tu, au, eu.
#[derive(Clone, Debug)]
pub struct PanelRow {
    pub id: char,
    pub name: &'static str,
    pub ent: [McEstimate; 3],
    pub var: [McEstimate; 3],
}

/// Evaluate every panel with `n` atoms per stream.
pub fn figure1_rows(n: usize, seed: u64) -> Result<Vec<PanelRow>> {
    let mut rows = Vec::with_capacity(6);
    for (id, name, family) in panels() {
        let spec = SamplerSpec::new(family, n, seed)?;
        let mut streams: Vec<[f64; 6]> = Vec::with_capacity(MC_STREAMS);
        for s in 0..MC_STREAMS {
            let q = sample_q(&spec.reseeded(derive_seed(seed, s as u64)))?;
            let ent = varuq::entropy::entropy_triple(&q);
            let agg = aggregate(&q, &WeightVector::unit(q.num_labels()), true)?;
            let norm = agg.normalized.expect("normalization requested");
            streams.push([ent.tu, ent.au, ent.eu, norm.tu, norm.au, norm.eu]);
        }
        let estimate = |i: usize| {
            let values: Vec<f64> = streams.iter().map(|s| s[i]).collect();
            let (mean, std_error) = mean_and_std_error(&values);
            McEstimate {
                mean,
                std_error,
                per_stream: values,
            }
        };
        rows.push(PanelRow {
            id,
            name,
            ent: [estimate(0), estimate(1), estimate(2)],
            var: [estimate(3), estimate(4), estimate(5)],
        });
    }
    Ok(rows)
}

const MEASURE_NAMES: [&str; 6] = ["tu_ent", "au_ent", "eu_ent", "tu_var", "au_var", "eu_var"];

/// Long-format CSV: one row per (panel, measure) with full precision.
pub fn figure1_csv(rows: &[PanelRow]) -> String {
    let mut out = String::from("panel,family,measure,mean,std_error\n");
    for row in rows {
        for (i, name) in MEASURE_NAMES.iter().enumerate() {
            let est = if i < 3 { &row.ent[i] } else { &row.var[i - 3] };
            let _ = writeln!(
                out,
                "{},{},{name},{:.12e},{:.12e}",
                row.id, row.name, est.mean, est.std_error
            );
        }
    }
    out
}

/// Fixed-width table for the terminal.
pub fn figure1_table(rows: &[PanelRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<5} {:<11} {:>15} {:>15} {:>15} {:>15} {:>15} {:>15}",
        "panel", "family", "tu_ent", "au_ent", "eu_ent", "tu_var", "au_var", "eu_var"
    );
    for row in rows {
        let cell = |est: &McEstimate| format!("{:.4}±{:.4}", est.mean, est.std_error);
        let _ = writeln!(
            out,
            "{:<5} {:<11} {:>15} {:>15} {:>15} {:>15} {:>15} {:>15}",
            row.id,
            row.name,
            cell(&row.ent[0]),
            cell(&row.ent[1]),
            cell(&row.ent[2]),
            cell(&row.var[0]),
            cell(&row.var[1]),
            cell(&row.var[2]),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vertex_pair_panel_is_exact() {
        let rows = figure1_rows(128, 7).unwrap();
        let f = rows.iter().find(|r| r.id == 'f').unwrap();
        assert_eq!(f.var[1].mean, 0.0); // au
        assert_abs_diff_eq!(f.var[2].mean, 1.0, epsilon = 1e-12); // eu normalized
        assert_eq!(f.var[2].std_error, 0.0);
        assert_abs_diff_eq!(f.ent[2].mean, 1.0, epsilon = 1e-12); // one bit
    }

    #[test]
    fn flat_panel_matches_the_closed_form_moments() {
        // normalized aggregate over two labels: au 2/3, eu 1/3
        let rows = figure1_rows(40_000, 11).unwrap();
        let a = rows.iter().find(|r| r.id == 'a').unwrap();
        assert!((a.var[1].mean - 2.0 / 3.0).abs() <= 4.0 * a.var[1].std_error + 1e-3);
        assert!((a.var[2].mean - 1.0 / 3.0).abs() <= 4.0 * a.var[2].std_error + 1e-3);
    }

    #[test]
    fn equal_width_panels_share_dispersion_exactly() {
        let rows = figure1_rows(4096, 3).unwrap();
        let d = rows.iter().find(|r| r.id == 'd').unwrap();
        let e = rows.iter().find(|r| r.id == 'e').unwrap();
        assert!((d.var[2].mean - e.var[2].mean).abs() <= 1e-15);
        assert!((d.ent[2].mean - e.ent[2].mean).abs() > 1e-3);
    }
}
