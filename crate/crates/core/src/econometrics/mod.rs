//! Panel regression with absorbed country and year effects, the one-way random
//! effects comparator, the Hausman specification test, permutation placebo tests
//! and semi-elasticity interpretation of log-regressor coefficients.

mod estimate;
mod hausman;
mod ols;
mod placebo;
mod random_effects;
mod table;
mod within;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::data::{DataError, PanelDataset, Variable};
use crate::ErrorKind;

pub use estimate::fit_fe;
pub use hausman::{hausman, hausman_test, HausmanResult};
pub use placebo::{placebo_test, placebo_test_with, PlaceboResult, MIN_PERMUTATIONS};
pub use random_effects::{fit_re, RandomEffectsDiagnostics};
pub use table::{regression_table_csv, regression_table_text};
pub use within::{within_transform, DesignMatrices};

#[derive(Debug, Error)]
pub enum EconometricsError {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("collinearity: {} absorbed by the fixed effects or linearly dependent", .0.join(", "))]
    Collinear(Vec<String>),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("within transform did not converge after {0} sweeps")]
    NotConverged(usize),
    #[error(transparent)]
    Data(#[from] DataError),
}

impl EconometricsError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            EconometricsError::InvalidSpec(_) => ErrorKind::Input,
            EconometricsError::Data(e) => e.kind(),
            _ => ErrorKind::Computation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    Level,
    /// Natural logarithm.
    Log,
}

/// A variable entering a regression, optionally log-transformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub variable: Variable,
    pub transform: Transform,
}

impl Term {
    pub fn level(variable: Variable) -> Self {
        Term { variable, transform: Transform::Level }
    }

    pub fn log(variable: Variable) -> Self {
        Term { variable, transform: Transform::Log }
    }

    pub fn values(&self, dataset: &PanelDataset) -> Result<Vec<f64>, EconometricsError> {
        let raw = dataset.column(self.variable);
        match self.transform {
            Transform::Level => Ok(raw),
            Transform::Log => raw
                .into_iter()
                .map(|v| {
                    if v > 0.0 {
                        Ok(v.ln())
                    } else {
                        Err(EconometricsError::Domain(format!("log({}) undefined for value {v}", self.variable)))
                    }
                })
                .collect(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.transform {
            Transform::Level => write!(f, "{}", self.variable),
            Transform::Log => write!(f, "log({})", self.variable),
        }
    }
}

impl FromStr for Term {
    type Err = EconometricsError;

    /// Accepts `name`, `log(name)` and `log:name`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let logged = s
            .strip_prefix("log(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("log:"));
        match logged {
            Some(inner) => Ok(Term::log(inner.parse()?)),
            None => Ok(Term::level(s.parse()?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeKind {
    #[default]
    Classical,
    /// Liang-Zeger sandwich clustered by country with the G/(G−1)·(n−1)/(n−K)
    /// small-sample factor; t-tests use G − 1 degrees of freedom.
    ClusterByCountry,
}

impl FromStr for SeKind {
    type Err = EconometricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classical" => Ok(SeKind::Classical),
            "cluster" | "cluster_by_country" => Ok(SeKind::ClusterByCountry),
            other => Err(EconometricsError::InvalidSpec(format!("unknown standard-error kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSpec {
    pub dependent: Term,
    pub regressors: Vec<Term>,
    pub include_country_fe: bool,
    pub include_year_fe: bool,
    pub se_kind: SeKind,
}

impl RegressionSpec {
    /// Two-way fixed effects with classical standard errors.
    pub fn new(dependent: Term, regressors: Vec<Term>) -> Result<Self, EconometricsError> {
        let spec = RegressionSpec {
            dependent,
            regressors,
            include_country_fe: true,
            include_year_fe: true,
            se_kind: SeKind::Classical,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// log investment, carbon price, policy index, technology index and energy
    /// intensity on `dependent`, two-way effects.
    pub fn baseline(dependent: Term) -> Self {
        RegressionSpec::new(
            dependent,
            vec![
                Term::log(Variable::Investment),
                Term::level(Variable::CarbonPrice),
                Term::level(Variable::PolicyIndex),
                Term::level(Variable::TechIndex),
                Term::level(Variable::EnergyIntensity),
            ],
        )
        .expect("baseline specification is valid")
    }

    /// The three outcome columns: GDP growth, log CO2 emissions, renewable share.
    pub fn baseline_outcomes() -> [Term; 3] {
        [Term::level(Variable::GdpGrowth), Term::log(Variable::Co2Emissions), Term::level(Variable::RenewableShare)]
    }

    pub fn with_fixed_effects(mut self, country: bool, year: bool) -> Self {
        self.include_country_fe = country;
        self.include_year_fe = year;
        self
    }

    pub fn with_se(mut self, se_kind: SeKind) -> Self {
        self.se_kind = se_kind;
        self
    }

    pub fn validate(&self) -> Result<(), EconometricsError> {
        if self.regressors.is_empty() {
            return Err(EconometricsError::InvalidSpec("at least one regressor is required".into()));
        }
        if self.regressors.iter().any(|r| r.variable == self.dependent.variable) {
            return Err(EconometricsError::InvalidSpec(format!(
                "dependent variable {} also appears among the regressors",
                self.dependent.variable
            )));
        }
        for (i, r) in self.regressors.iter().enumerate() {
            if self.regressors[..i].contains(r) {
                return Err(EconometricsError::InvalidSpec(format!("regressor {r} listed twice")));
            }
        }
        Ok(())
    }

    pub fn regressor_names(&self) -> Vec<String> {
        self.regressors.iter().map(Term::to_string).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Estimator {
    FixedEffects { country: bool, year: bool },
    RandomEffects(RandomEffectsDiagnostics),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub estimator: Estimator,
    pub dependent: String,
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    /// Two-sided p-values of the t-statistics.
    pub p_values: Vec<f64>,
    /// Covariance of the reported coefficients.
    pub covariance: DMatrix<f64>,
    /// Constant term; only the random-effects estimator reports one.
    pub intercept: Option<f64>,
    /// Within R².
    pub r_squared: f64,
    /// Joint significance of the listed regressors (Wald form, F(k, df)).
    pub f_statistic: f64,
    pub f_p_value: f64,
    pub n_observations: usize,
    /// Residual degrees of freedom after absorbed effects and regressors.
    pub degrees_freedom: usize,
    /// Degrees of freedom of the reference t distribution.
    pub t_degrees_freedom: usize,
    pub se_kind: SeKind,
    /// Error variance estimate.
    pub sigma2: f64,
    pub residuals: Vec<f64>,
}

impl RegressionResult {
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.coefficients[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Size of a proportional change in a regressor entering in logs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeChange {
    /// E.g. 0.10 for a 10% increase.
    Fraction(f64),
    Doubling,
}

/// Level effect on the outcome of a relative change in a log regressor:
/// `coefficient * ln(1 + change)`.
pub fn semi_elasticity(coefficient: f64, change: RelativeChange) -> Result<f64, EconometricsError> {
    match change {
        RelativeChange::Doubling => Ok(coefficient * std::f64::consts::LN_2),
        RelativeChange::Fraction(f) if f > -1.0 => Ok(coefficient * f.ln_1p()),
        RelativeChange::Fraction(f) => {
            Err(EconometricsError::Domain(format!("relative change must exceed -1, got {f}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semi_elasticity_values() {
        assert!((semi_elasticity(0.285, RelativeChange::Fraction(0.10)).unwrap() - 0.02717).abs() < 5e-4);
        assert!((semi_elasticity(0.285, RelativeChange::Doubling).unwrap() - 0.19755).abs() < 5e-4);
        assert!((semi_elasticity(0.358, RelativeChange::Fraction(0.10)).unwrap() - 0.03413).abs() < 5e-4);
        assert!(semi_elasticity(0.285, RelativeChange::Fraction(-1.0)).is_err());
    }

    #[test]
    fn term_parsing() {
        assert_eq!("log(investment)".parse::<Term>().unwrap(), Term::log(Variable::Investment));
        assert_eq!("log:co2_mt".parse::<Term>().unwrap(), Term::log(Variable::Co2Emissions));
        assert_eq!("carbon_price".parse::<Term>().unwrap(), Term::level(Variable::CarbonPrice));
        assert!("nope".parse::<Term>().is_err());
        assert_eq!(Term::log(Variable::Investment).to_string(), "log(investment)");
    }

    #[test]
    fn spec_validation() {
        let dep = Term::level(Variable::GdpGrowth);
        assert!(RegressionSpec::new(dep, vec![]).is_err());
        assert!(RegressionSpec::new(dep, vec![Term::log(Variable::GdpGrowth)]).is_err());
        let x = Term::level(Variable::TechIndex);
        assert!(RegressionSpec::new(dep, vec![x, x]).is_err());
    }
}
