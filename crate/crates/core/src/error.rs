use thiserror::Error;

use crate::ablation::AblationError;
use crate::appraisal::AppraisalError;
use crate::data::DataError;
use crate::econometrics::EconometricsError;
use crate::scenario::ScenarioError;
use crate::sensitivity::SensitivityError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure category, used by callers such as the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or invalid input: schema, parse, integrity or validation failures.
    Input,
    /// The input was well formed but the computation is undefined for it.
    Computation,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Appraisal(#[from] AppraisalError),
    #[error(transparent)]
    Econometrics(#[from] EconometricsError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Sensitivity(#[from] SensitivityError),
    #[error(transparent)]
    Ablation(#[from] AblationError),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Data(e) => e.kind(),
            Error::Appraisal(e) => e.kind(),
            Error::Econometrics(e) => e.kind(),
            Error::Scenario(e) => e.kind(),
            Error::Sensitivity(e) => e.kind(),
            Error::Ablation(e) => e.kind(),
        }
    }
}
