use serde::{Deserialize, Serialize};

use super::ScenarioError;

pub const SCHEMA_VERSION: u32 = 1;

/// Base-year (start_year) state of the global energy system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    /// Percent.
    pub renewable_share: f64,
    /// Gt CO2 per year.
    pub emissions: f64,
    /// Trillion USD per year.
    pub annual_investment: f64,
    /// Millions.
    pub jobs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceAnchor {
    pub year: i32,
    /// USD per tonne CO2.
    pub price: f64,
}

/// Unit-cost inputs for the competitiveness comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechnologyParams {
    /// USD per MWh before carbon pricing.
    pub fossil_private_cost: f64,
    /// Tonnes CO2 per MWh.
    pub fossil_emission_factor: f64,
    /// Clean supply cost at the base cumulative capacity, USD per MWh.
    pub clean_base_cost: f64,
    /// Cumulative clean additions at the start year, in share-point × demand-index units.
    pub base_cumulative_capacity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsParams {
    /// Logistic rate per unit relative cost advantage at stringency 1.
    pub adoption_rate: f64,
    /// Fraction of the installed clean base replaced each year.
    pub replacement_rate: f64,
}

/// Reduced-form macro outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyParams {
    /// World GDP in the start year, trillion USD.
    pub world_gdp: f64,
    /// Percent per year.
    pub gdp_growth: f64,
    /// GDP impact (percent) per percentage point of cumulative clean investment in
    /// cumulative GDP.
    pub gdp_response: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    pub start_year: i32,
    pub end_year: i32,
    /// Clean-technology learning rate per doubling of cumulative additions.
    pub learning_rate: f64,
    /// Multiplier on adoption speed, ≥ 0.
    pub policy_stringency: f64,
    /// Renewable-share asymptote, percent.
    pub adoption_ceiling: f64,
    /// Energy demand growth, percent per year.
    pub demand_growth: f64,
    /// Jobs (millions) per trillion USD of annual investment.
    pub employment_factor: f64,
    /// Stranded assets (trillion USD) per unit of displaced fossil share.
    pub stranded_asset_factor: f64,
    pub initial_state: InitialState,
    /// Anchors sorted by year; linearly interpolated, flat outside the anchors.
    /// An empty path means no carbon price.
    #[serde(default)]
    pub carbon_price_path: Vec<PriceAnchor>,
    pub technology: TechnologyParams,
    pub dynamics: DynamicsParams,
    pub economy: EconomyParams,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| ScenarioError::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario configs serialise")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let fail = |message: String| Err(ScenarioError::Invalid { scenario: self.name.clone(), message });
        if self.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.start_year >= self.end_year {
            return fail(format!("start_year {} must precede end_year {}", self.start_year, self.end_year));
        }
        if !(0.0..1.0).contains(&self.learning_rate) {
            return fail(format!("learning_rate must lie in [0, 1), got {}", self.learning_rate));
        }
        if !(self.policy_stringency >= 0.0) {
            return fail(format!("policy_stringency must be >= 0, got {}", self.policy_stringency));
        }
        if !(self.adoption_ceiling > 0.0 && self.adoption_ceiling <= 100.0) {
            return fail(format!("adoption_ceiling must lie in (0, 100], got {}", self.adoption_ceiling));
        }
        let s = &self.initial_state;
        if !(s.renewable_share >= 0.0 && s.renewable_share < 100.0) {
            return fail(format!("initial renewable_share must lie in [0, 100), got {}", s.renewable_share));
        }
        if s.renewable_share > self.adoption_ceiling {
            return fail("initial renewable_share exceeds adoption_ceiling".into());
        }
        for (what, v) in [("emissions", s.emissions), ("annual_investment", s.annual_investment), ("jobs", s.jobs)] {
            if !(v >= 0.0 && v.is_finite()) {
                return fail(format!("initial {what} must be >= 0, got {v}"));
            }
        }
        if !(self.demand_growth > -100.0) {
            return fail(format!("demand_growth must exceed -100%, got {}", self.demand_growth));
        }
        if !(self.employment_factor >= 0.0 && self.stranded_asset_factor >= 0.0) {
            return fail("employment_factor and stranded_asset_factor must be >= 0".into());
        }
        for w in self.carbon_price_path.windows(2) {
            if w[0].year >= w[1].year {
                return fail("carbon_price_path anchors must be sorted by strictly increasing year".into());
            }
        }
        if self.carbon_price_path.iter().any(|a| !(a.price >= 0.0)) {
            return fail("carbon prices must be >= 0".into());
        }
        let t = &self.technology;
        if !(t.fossil_private_cost > 0.0 && t.fossil_emission_factor >= 0.0) {
            return fail("fossil_private_cost must be > 0 and fossil_emission_factor >= 0".into());
        }
        if !(t.clean_base_cost > 0.0 && t.base_cumulative_capacity > 0.0) {
            return fail("clean_base_cost and base_cumulative_capacity must be > 0".into());
        }
        let d = &self.dynamics;
        if !(d.adoption_rate >= 0.0 && d.replacement_rate >= 0.0) {
            return fail("adoption_rate and replacement_rate must be >= 0".into());
        }
        let e = &self.economy;
        if !(e.world_gdp > 0.0 && e.gdp_growth > -100.0) {
            return fail("world_gdp must be > 0 and gdp_growth > -100%".into());
        }
        Ok(())
    }

    /// Carbon price in `year`.
    pub fn carbon_price(&self, year: i32) -> f64 {
        let path = &self.carbon_price_path;
        match path.iter().position(|a| a.year >= year) {
            None => path.last().map_or(0.0, |a| a.price),
            Some(0) => path[0].price,
            Some(i) => {
                let (a, b) = (path[i - 1], path[i]);
                let w = (year - a.year) as f64 / (b.year - a.year) as f64;
                a.price + w * (b.price - a.price)
            }
        }
    }
}
