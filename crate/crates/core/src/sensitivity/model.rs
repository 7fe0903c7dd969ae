use serde::{Deserialize, Serialize};

use super::{tornado_with, ParameterPerturbation, SensitivityError, SensitivityRecord};
use crate::appraisal::{learning_cost, npv, CashFlowSchedule, LearningCurve};
use crate::par::Execution;

/// Parameters of [`NpvProjectModel`] that a perturbation may move.
pub const NPV_PROJECT_PARAMETERS: [&str; 10] = [
    "capex",
    "learning_rate",
    "capacity_doublings",
    "policy_support",
    "generation",
    "energy_price",
    "carbon_price",
    "emission_factor",
    "opex",
    "discount_rate",
];

/// A generation project whose revenue is the energy price plus the carbon
/// price on displaced emissions. Money in million USD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NpvProjectModel {
    /// Overnight cost before learning and support.
    pub capex: f64,
    pub learning_rate: f64,
    /// Doublings of cumulative capacity since `capex` was quoted.
    pub capacity_doublings: f64,
    /// Fraction of capex covered by policy support.
    pub policy_support: f64,
    /// GWh per year.
    pub generation: f64,
    /// USD/MWh.
    pub energy_price: f64,
    /// USD/tCO2.
    pub carbon_price: f64,
    /// tCO2 displaced per MWh.
    pub emission_factor: f64,
    /// Per year.
    pub opex: f64,
    pub discount_rate: f64,
    /// Years.
    pub lifetime: u32,
}

impl NpvProjectModel {
    fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "capex" => self.capex,
            "learning_rate" => self.learning_rate,
            "capacity_doublings" => self.capacity_doublings,
            "policy_support" => self.policy_support,
            "generation" => self.generation,
            "energy_price" => self.energy_price,
            "carbon_price" => self.carbon_price,
            "emission_factor" => self.emission_factor,
            "opex" => self.opex,
            "discount_rate" => self.discount_rate,
            _ => return None,
        })
    }

    fn with(&self, name: &str, value: f64) -> Option<Self> {
        let mut m = self.clone();
        let slot = match name {
            "capex" => &mut m.capex,
            "learning_rate" => &mut m.learning_rate,
            "capacity_doublings" => &mut m.capacity_doublings,
            "policy_support" => &mut m.policy_support,
            "generation" => &mut m.generation,
            "energy_price" => &mut m.energy_price,
            "carbon_price" => &mut m.carbon_price,
            "emission_factor" => &mut m.emission_factor,
            "opex" => &mut m.opex,
            "discount_rate" => &mut m.discount_rate,
            _ => return None,
        };
        *slot = value;
        Some(m)
    }

    pub fn schedule(&self) -> Option<CashFlowSchedule> {
        if !(0.0..=1.0).contains(&self.policy_support) || self.lifetime == 0 {
            return None;
        }
        let curve = LearningCurve::new(self.capex, self.learning_rate, 1.0).ok()?;
        let unit_cost = learning_cost(&curve, self.capacity_doublings.exp2()).ok()?;
        let revenue = self.generation * (self.energy_price + self.carbon_price * self.emission_factor) / 1000.0;
        let cash_flows = vec![revenue - self.opex; self.lifetime as usize];
        CashFlowSchedule::new(unit_cost * (1.0 - self.policy_support), cash_flows, self.discount_rate).ok()
    }

    /// NPV in million USD, or NaN when the parameters leave the valid domain.
    pub fn npv(&self) -> f64 {
        self.schedule().map_or(f64::NAN, |s| npv(&s))
    }
}

/// Evaluator behind a tornado sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SensitivityModel {
    /// `slope × value` for any parameter.
    Linear { slope: f64 },
    /// `coefficient × value^exponent` for any parameter.
    Power { coefficient: f64, exponent: f64 },
    Constant { value: f64 },
    NpvProject(NpvProjectModel),
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    schema_version: u32,
    model: SensitivityModel,
}

impl SensitivityModel {
    pub fn from_toml_str(text: &str) -> Result<Self, SensitivityError> {
        let file: ModelFile = toml::from_str(text).map_err(|e| SensitivityError::Config(e.to_string()))?;
        if file.schema_version != 1 {
            return Err(SensitivityError::Config(format!("unsupported schema_version {}", file.schema_version)));
        }
        Ok(file.model)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&ModelFile { schema_version: 1, model: self.clone() }).expect("model serializes")
    }

    pub fn evaluate(&self, parameter: &str, value: f64) -> f64 {
        match self {
            SensitivityModel::Linear { slope } => slope * value,
            SensitivityModel::Power { coefficient, exponent } => coefficient * value.powf(*exponent),
            SensitivityModel::Constant { value: c } => *c,
            SensitivityModel::NpvProject(m) => m.with(parameter, value).map_or(f64::NAN, |m| m.npv()),
        }
    }

    /// Rejects parameters the model does not know and, for the project model,
    /// baselines that disagree with the configured values.
    pub fn check(&self, perturbations: &[ParameterPerturbation]) -> Result<(), SensitivityError> {
        let SensitivityModel::NpvProject(m) = self else {
            return Ok(());
        };
        for p in perturbations {
            let configured = m.get(p.name()).ok_or_else(|| SensitivityError::UnknownParameter(p.name().into()))?;
            if (configured - p.baseline()).abs() > 1e-12 * configured.abs().max(1.0) {
                return Err(SensitivityError::Invalid {
                    name: p.name().into(),
                    message: format!("baseline {} differs from the model value {configured}", p.baseline()),
                });
            }
        }
        Ok(())
    }

    pub fn tornado(
        &self,
        exec: Execution,
        perturbations: &[ParameterPerturbation],
    ) -> Result<Vec<SensitivityRecord>, SensitivityError> {
        self.check(perturbations)?;
        tornado_with(exec, |name, v| self.evaluate(name, v), perturbations)
    }
}
