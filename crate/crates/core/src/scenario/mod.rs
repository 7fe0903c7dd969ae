//! Annual simulation of energy-transition pathways and cross-scenario comparison.
//!
//! Each year the renewable share follows a logistic step toward the adoption
//! ceiling. The intrinsic rate is `policy_stringency × adoption_rate × advantage`,
//! where `advantage` is the relative cost gap between carbon-adjusted fossil
//! supply and learning-curve clean supply (floored at zero, so adoption never
//! reverses). Emissions scale with demand and with the remaining fossil share;
//! investment follows gross clean additions (share growth plus replacement of
//! the installed base) at the current clean unit cost; jobs are proportional to
//! investment.

mod compare;
mod config;
mod simulate;

use thiserror::Error;

use crate::appraisal::AppraisalError;
use crate::ErrorKind;

pub use compare::{compare, PairwiseGap, ScenarioComparison};
pub use config::{
    DynamicsParams, EconomyParams, InitialState, PriceAnchor, ScenarioConfig, TechnologyParams, SCHEMA_VERSION,
};
pub use simulate::{
    parse_trajectory_csv, simulate, trajectory_csv, ScenarioResult, SimulationDiagnostics, TrajectoryPoint,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid scenario `{scenario}`: {message}")]
    Invalid { scenario: String, message: String },
    #[error("scenario year ranges differ: `{first}` covers {first_range:?}, `{second}` covers {second_range:?}")]
    YearMismatch { first: String, first_range: (i32, i32), second: String, second_range: (i32, i32) },
    #[error("nothing to compare")]
    Empty,
    #[error("trajectory parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Appraisal(#[from] AppraisalError),
}

impl ScenarioError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            ScenarioError::Appraisal(e) => e.kind(),
            _ => ErrorKind::Input,
        }
    }
}
