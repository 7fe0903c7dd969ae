use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{AblationConfiguration, AblationError, AblationRecord, Component};
use crate::appraisal::{irr, npv, CashFlowSchedule};
use crate::par::{self, Execution};
use crate::scenario::{simulate, ScenarioConfig};

fn one() -> f64 {
    1.0
}

/// How disabling one component degrades the parameters it maps to. Every field
/// defaults to "no change".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentEffect {
    /// Multiplies every anchor of the carbon price path.
    #[serde(default = "one")]
    pub carbon_price_factor: f64,
    /// Multiplies the scenario learning rate.
    #[serde(default = "one")]
    pub learning_rate_factor: f64,
    /// Added to the project discount rate.
    #[serde(default)]
    pub discount_premium: f64,
    /// Percentage points taken off the adoption ceiling.
    #[serde(default)]
    pub ceiling_haircut: f64,
    /// Multiplies policy stringency.
    #[serde(default = "one")]
    pub stringency_factor: f64,
    /// Fraction of project operating cash flow lost.
    #[serde(default)]
    pub revenue_haircut: f64,
}

impl Default for ComponentEffect {
    fn default() -> Self {
        ComponentEffect {
            carbon_price_factor: 1.0,
            learning_rate_factor: 1.0,
            discount_premium: 0.0,
            ceiling_haircut: 0.0,
            stringency_factor: 1.0,
            revenue_haircut: 0.0,
        }
    }
}

impl ComponentEffect {
    fn validate(&self, component: Component) -> Result<(), AblationError> {
        let fail = |what: &str| Err(AblationError::Config(format!("effects.{component}.{what}")));
        if !(0.0..=1.0).contains(&self.carbon_price_factor) {
            return fail("carbon_price_factor must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.learning_rate_factor) {
            return fail("learning_rate_factor must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.stringency_factor) {
            return fail("stringency_factor must lie in [0, 1]");
        }
        if !(self.discount_premium >= 0.0 && self.discount_premium.is_finite()) {
            return fail("discount_premium must be >= 0");
        }
        if !(0.0..100.0).contains(&self.ceiling_haircut) {
            return fail("ceiling_haircut must lie in [0, 100)");
        }
        if !(0.0..1.0).contains(&self.revenue_haircut) {
            return fail("revenue_haircut must lie in [0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentEffects {
    #[serde(default)]
    pub carbon_pricing: ComponentEffect,
    #[serde(default)]
    pub green_finance: ComponentEffect,
    #[serde(default)]
    pub technology_support: ComponentEffect,
    #[serde(default)]
    pub grid_integration: ComponentEffect,
    #[serde(default)]
    pub storage_investment: ComponentEffect,
}

impl ComponentEffects {
    pub fn get(&self, component: Component) -> &ComponentEffect {
        match component {
            Component::CarbonPricing => &self.carbon_pricing,
            Component::GreenFinance => &self.green_finance,
            Component::TechnologySupport => &self.technology_support,
            Component::GridIntegration => &self.grid_integration,
            Component::StorageInvestment => &self.storage_investment,
        }
    }
}

/// Weights of the normalised (NPV, IRR, CO2 reduction) composite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectivenessWeights {
    pub npv: f64,
    pub irr: f64,
    pub co2: f64,
}

impl Default for EffectivenessWeights {
    fn default() -> Self {
        EffectivenessWeights { npv: 1.0 / 3.0, irr: 1.0 / 3.0, co2: 1.0 / 3.0 }
    }
}

/// A representative clean-generation project built in `build_year`. Money in
/// billion USD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectSpec {
    /// Outlay at the scenario's starting clean cost; scaled by the learning
    /// curve to the build year.
    pub initial_investment: f64,
    pub build_year: i32,
    pub lifetime: u32,
    /// Operating cash flow per year before carbon revenue.
    pub base_cash_flow: f64,
    /// Mt CO2 displaced per year, credited at the scenario carbon price.
    pub displaced_emissions: f64,
    pub discount_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationStudy {
    pub scenario: ScenarioConfig,
    pub project: ProjectSpec,
    pub effects: ComponentEffects,
    pub weights: EffectivenessWeights,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StudyFile {
    schema_version: u32,
    /// Relative to the study file.
    scenario: PathBuf,
    #[serde(default)]
    weights: EffectivenessWeights,
    project: ProjectSpec,
    #[serde(default)]
    effects: ComponentEffects,
}

impl AblationStudy {
    pub fn new(
        scenario: ScenarioConfig,
        project: ProjectSpec,
        effects: ComponentEffects,
        weights: EffectivenessWeights,
    ) -> Result<Self, AblationError> {
        scenario.validate()?;
        for c in Component::ALL {
            effects.get(c).validate(c)?;
        }
        let w = weights;
        if ![w.npv, w.irr, w.co2].iter().all(|v| *v >= 0.0 && v.is_finite()) || w.npv + w.irr + w.co2 <= 0.0 {
            return Err(AblationError::Config("weights must be >= 0 with a positive sum".into()));
        }
        let p = project;
        if !(p.build_year >= scenario.start_year && p.build_year <= scenario.end_year) {
            return Err(AblationError::Config(format!(
                "project.build_year {} lies outside the scenario years {}..={}",
                p.build_year, scenario.start_year, scenario.end_year
            )));
        }
        if p.lifetime == 0 || !(p.initial_investment >= 0.0) || !(p.displaced_emissions >= 0.0) {
            return Err(AblationError::Config(
                "project needs lifetime >= 1, initial_investment >= 0 and displaced_emissions >= 0".into(),
            ));
        }
        Ok(AblationStudy { scenario, project, effects, weights })
    }

    /// Reads a study file and the scenario it references. Returns the study and
    /// the resolved scenario path.
    pub fn load(path: &Path) -> Result<(Self, PathBuf), AblationError> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|e| AblationError::Config(format!("{}: {e}", p.display())))
        };
        let file: StudyFile = toml::from_str(&read(path)?).map_err(|e| AblationError::Config(e.to_string()))?;
        if file.schema_version != 1 {
            return Err(AblationError::Config(format!("unsupported schema_version {}", file.schema_version)));
        }
        let scenario_path = path.parent().unwrap_or(Path::new(".")).join(&file.scenario);
        let scenario = ScenarioConfig::from_toml_str(&read(&scenario_path)?)?;
        Ok((Self::new(scenario, file.project, file.effects, file.weights)?, scenario_path))
    }

    /// Scenario and project with every disabled component's effect applied.
    pub fn apply(&self, config: &AblationConfiguration) -> (ScenarioConfig, ProjectSpec, f64) {
        let mut scenario = self.scenario.clone();
        let mut project = self.project;
        let mut revenue_factor = 1.0;
        for c in Component::ALL.into_iter().filter(|&c| !config.is_enabled(c)) {
            let e = self.effects.get(c);
            for anchor in &mut scenario.carbon_price_path {
                anchor.price *= e.carbon_price_factor;
            }
            scenario.learning_rate *= e.learning_rate_factor;
            scenario.policy_stringency *= e.stringency_factor;
            scenario.adoption_ceiling =
                (scenario.adoption_ceiling - e.ceiling_haircut).max(scenario.initial_state.renewable_share);
            project.discount_rate += e.discount_premium;
            revenue_factor *= 1.0 - e.revenue_haircut;
        }
        (scenario, project, revenue_factor)
    }
}

/// Unnormalised outcome of one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelEvaluation {
    pub npv: f64,
    /// Percent.
    pub irr: f64,
    /// Percent of the initial fossil share displaced by the end year.
    pub co2_reduction: f64,
}

fn evaluate_raw(config: &AblationConfiguration, study: &AblationStudy) -> Result<ModelEvaluation, AblationError> {
    let (scenario, project, revenue_factor) = study.apply(config);
    let result = simulate(&scenario)?;
    let s0 = scenario.initial_state.renewable_share;
    let co2_reduction = 100.0 * (result.end().renewable_share - s0) / (100.0 - s0);

    let build = (project.build_year - scenario.start_year) as usize;
    let cost_ratio = result.diagnostics.clean_cost[build] / scenario.technology.clean_base_cost;
    let cash_flows = (1..=project.lifetime as i32)
        .map(|t| {
            let price = scenario.carbon_price(project.build_year + t);
            (project.base_cash_flow + project.displaced_emissions * price / 1000.0) * revenue_factor
        })
        .collect();
    let schedule = CashFlowSchedule::new(project.initial_investment * cost_ratio, cash_flows, project.discount_rate)?;
    Ok(ModelEvaluation { npv: npv(&schedule), irr: 100.0 * irr(&schedule)?.rate, co2_reduction })
}

/// `100 ×` the weighted mean of each metric min-max normalised between the
/// `lower` and `upper` anchors, clamped to [0, 100]. A metric with no spread
/// between the anchors scores 1.
pub fn effectiveness(
    m: &ModelEvaluation,
    lower: &ModelEvaluation,
    upper: &ModelEvaluation,
    weights: &EffectivenessWeights,
) -> f64 {
    let norm = |v: f64, lo: f64, hi: f64| if hi > lo { (v - lo) / (hi - lo) } else { 1.0 };
    let total = weights.npv + weights.irr + weights.co2;
    let score = (weights.npv * norm(m.npv, lower.npv, upper.npv)
        + weights.irr * norm(m.irr, lower.irr, upper.irr)
        + weights.co2 * norm(m.co2_reduction, lower.co2_reduction, upper.co2_reduction))
        / total;
    (100.0 * score).clamp(0.0, 100.0)
}

fn to_record(label: &str, m: &ModelEvaluation, lower: &ModelEvaluation, upper: &ModelEvaluation, w: &EffectivenessWeights) -> AblationRecord {
    AblationRecord {
        label: label.to_string(),
        npv: m.npv,
        irr: m.irr,
        co2_reduction: m.co2_reduction.clamp(0.0, 100.0),
        effectiveness: effectiveness(m, lower, upper, w),
    }
}

/// Scores one configuration; effectiveness is anchored at the no-policy and
/// full configurations of the same study.
pub fn evaluate_configuration(
    config: &AblationConfiguration,
    study: &AblationStudy,
) -> Result<AblationRecord, AblationError> {
    let lower = evaluate_raw(&AblationConfiguration::none(), study)?;
    let upper = evaluate_raw(&AblationConfiguration::full(), study)?;
    let m = evaluate_raw(config, study)?;
    Ok(to_record(&config.label, &m, &lower, &upper, &study.weights))
}

pub fn run_ablation_model(
    exec: Execution,
    study: &AblationStudy,
    configs: &[AblationConfiguration],
) -> Result<Vec<AblationRecord>, AblationError> {
    let mut seen = std::collections::BTreeSet::new();
    if let Some(c) = configs.iter().find(|c| !seen.insert(c.label.as_str())) {
        return Err(AblationError::Invalid(format!("duplicate configuration label `{}`", c.label)));
    }
    let lower = evaluate_raw(&AblationConfiguration::none(), study)?;
    let upper = evaluate_raw(&AblationConfiguration::full(), study)?;
    par::map(exec, configs, |c| {
        evaluate_raw(c, study).map(|m| to_record(&c.label, &m, &lower, &upper, &study.weights))
    })
    .into_iter()
    .collect()
}

/// All 32 component subsets, ordered by bitmask over [`Component::ALL`].
pub fn all_subsets() -> Vec<AblationConfiguration> {
    (0u32..1 << Component::ALL.len())
        .map(|mask| {
            let enabled: Vec<Component> =
                Component::ALL.into_iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, c)| c).collect();
            match enabled.len() {
                0 => AblationConfiguration::none(),
                5 => AblationConfiguration::full(),
                _ => {
                    let label = enabled.iter().map(|c| c.label()).collect::<Vec<_>>().join(" + ");
                    AblationConfiguration::new(label, enabled)
                }
            }
        })
        .collect()
}
