//! Variance- and entropy-based uncertainty measures over second-order
//! distributions in classification.
//!
//! A classifier that reports a distribution *over* first-order label
//! distributions — an ensemble, a Bayesian posterior, a Dirichlet — carries
//! two kinds of uncertainty: the randomness of the outcome itself
//! (aleatoric) and the spread of belief about the true label distribution
//! (epistemic). This crate implements both of the standard readings:
//!
//! - [`variance`]: per-label indicator variances split by the law of total
//!   variance, with weighted aggregation over labels;
//! - [`entropy`]: Shannon entropy of the mean split into conditional
//!   entropy plus mutual information.
//!
//! Around the measures sit the tools to evaluate them: [`simplex`] holds
//! the distribution types, [`transforms`] the spreads and shifts the axiom
//! checks are built on, [`axioms`] the seeded verdict suite, [`oracles`]
//! independent references (closed-form Dirichlet moments, Monte Carlo
//! streams, grid maximization), and [`harness`] the desk-scale experiment
//! protocols (accuracy-rejection curves, out-of-distribution AUROC,
//! correct/incorrect histograms, a synthetic ensemble generator).
//!
//! Batch operations run data-parallel under the `parallel` feature
//! (default) and sequentially without it; outputs are bit-identical either
//! way.
//!
//! ## Quick start
//!
//! ```
//! use varuq::entropy::entropy_triple;
//! use varuq::simplex::{AtomMixture, Categorical, WeightVector};
//! use varuq::variance::aggregate;
//!
//! let members = [
//!     Categorical::new(vec![0.8, 0.1, 0.1])?,
//!     Categorical::new(vec![0.6, 0.3, 0.1])?,
//! ];
//! let q = AtomMixture::from_ensemble(&members)?;
//!
//! let agg = aggregate(&q, &WeightVector::unit(3), false)?;
//! assert!((agg.tu - (agg.au + agg.eu)).abs() <= 1e-12);
//!
//! let ent = entropy_triple(&q);
//! assert!((ent.tu - (ent.au + ent.eu)).abs() <= 1e-10);
//! # Ok::<(), varuq::Error>(())
//! ```

pub mod axioms;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod math;
pub mod oracles;
pub(crate) mod par;
pub mod simplex;
pub mod transforms;
pub mod variance;

pub use error::{Error, Result};

/// Library version, echoed into run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
