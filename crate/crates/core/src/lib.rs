//! Investment appraisal, panel econometrics, scenario simulation and
//! sensitivity/ablation analysis for low-carbon energy infrastructure.
//!
//! * [`data`]: country-year panel schema, CSV ingestion, descriptive statistics.
//! * [`appraisal`]: NPV, IRR, lattice real options, carbon-adjusted cost, experience curves.
//! * [`econometrics`]: two-way fixed effects, Swamy-Arora random effects, the Hausman
//!   test, permutation placebo tests, semi-elasticities.
//! * [`scenario`]: annual transition pathways to 2050 and cross-scenario comparison.
//! * [`sensitivity`] and [`ablation`]: tornado sweeps and component ablation.
//!
//! Permutations, Monte Carlo replications, parameter sweeps and ablation subsets
//! run on rayon when the `parallel` feature is enabled and sequentially otherwise.
//! See [`par`].

// `!(x >= 0.0)` is how NaN gets rejected alongside negatives.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ablation;
pub mod appraisal;
pub mod data;
pub mod econometrics;
mod error;
pub mod par;
pub mod scenario;
pub mod sensitivity;
pub mod stats;

pub use error::{Error, ErrorKind, Result};

/// Directory holding the fixtures shipped with this crate.
pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}
