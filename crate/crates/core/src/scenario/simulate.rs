use crate::appraisal::{adjusted_cost, learning_cost, CarbonCostParams, LearningCurve};

use super::{ScenarioConfig, ScenarioError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub year: i32,
    /// Percent.
    pub renewable_share: f64,
    /// Gt CO2 per year.
    pub emissions: f64,
    /// Trillion USD per year.
    pub investment: f64,
    /// Millions.
    pub jobs: f64,
}

/// Per-year drivers behind the trajectory, aligned with it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimulationDiagnostics {
    pub carbon_price: Vec<f64>,
    pub fossil_cost: Vec<f64>,
    pub clean_cost: Vec<f64>,
    /// Years whose logistic rate exceeded 1 and was clamped.
    pub clamped_years: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub name: String,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Trapezoidal sum of annual emissions, Gt.
    pub cumulative_emissions: f64,
    /// Percent of GDP in the end year.
    pub gdp_impact_pct: f64,
    /// Trillion USD.
    pub stranded_assets: f64,
    pub diagnostics: SimulationDiagnostics,
}

impl ScenarioResult {
    pub fn start_year(&self) -> i32 {
        self.trajectory[0].year
    }

    pub fn end_year(&self) -> i32 {
        self.trajectory[self.trajectory.len() - 1].year
    }

    pub fn end(&self) -> &TrajectoryPoint {
        &self.trajectory[self.trajectory.len() - 1]
    }

    /// Emissions over the whole horizon with the renewable share frozen at its
    /// start value, i.e. demand growth alone.
    pub fn frozen_share_emissions(&self, config: &ScenarioConfig) -> f64 {
        let growth = 1.0 + config.demand_growth / 100.0;
        config.initial_state.emissions * growth.powi(config.end_year - config.start_year)
    }
}

pub(crate) fn trapezoid(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for v in values {
        if let Some(p) = prev {
            total += 0.5 * (p + v);
        }
        prev = Some(v);
    }
    total
}

/// Runs the annual simulation from `start_year` to `end_year` inclusive. The
/// start-year point reproduces `initial_state`.
pub fn simulate(config: &ScenarioConfig) -> Result<ScenarioResult, ScenarioError> {
    config.validate()?;
    let init = config.initial_state;
    let tech = config.technology;
    let dyn_ = config.dynamics;
    let ceiling = config.adoption_ceiling;
    let s0 = init.renewable_share;
    let curve = LearningCurve::new(tech.clean_base_cost, config.learning_rate, tech.base_cumulative_capacity)?;
    let fossil_cost = |year: i32| -> Result<f64, ScenarioError> {
        let price = config.carbon_price(year);
        Ok(adjusted_cost(&CarbonCostParams::new(tech.fossil_private_cost, price, tech.fossil_emission_factor)?))
    };
    let adoption = |fossil: f64, clean: f64| {
        let advantage = ((fossil - clean) / fossil).max(0.0);
        config.policy_stringency * dyn_.adoption_rate * advantage
    };
    let logistic = |share: f64, rate: f64| (share + rate * share * (1.0 - share / ceiling)).clamp(0.0, ceiling);

    // Capital intensity: start-year investment per unit of gross additions at
    // start-year conditions.
    let fossil0 = fossil_cost(config.start_year)?;
    let rate0 = adoption(fossil0, tech.clean_base_cost).min(1.0);
    let additions0 = (logistic(s0, rate0) - s0).max(0.0) + dyn_.replacement_rate * s0;
    let capital_intensity = if additions0 > 0.0 { init.annual_investment / additions0 } else { 0.0 };

    let demand_factor = 1.0 + config.demand_growth / 100.0;
    let mut diagnostics = SimulationDiagnostics {
        carbon_price: vec![config.carbon_price(config.start_year)],
        fossil_cost: vec![fossil0],
        clean_cost: vec![tech.clean_base_cost],
        clamped_years: Vec::new(),
    };
    let mut trajectory = vec![TrajectoryPoint {
        year: config.start_year,
        renewable_share: s0,
        emissions: init.emissions,
        investment: init.annual_investment,
        jobs: init.jobs,
    }];
    let mut share = s0;
    let mut cumulative = tech.base_cumulative_capacity;
    for year in config.start_year + 1..=config.end_year {
        let fossil = fossil_cost(year)?;
        let clean = learning_cost(&curve, cumulative)?;
        let mut rate = adoption(fossil, clean);
        if rate > 1.0 {
            rate = 1.0;
            diagnostics.clamped_years.push(year);
        }
        let next = logistic(share, rate);
        let demand = demand_factor.powi(year - config.start_year);
        let additions = ((next - share).max(0.0) + dyn_.replacement_rate * next) * demand;
        cumulative += additions;
        share = next;

        let investment = capital_intensity * (clean / tech.clean_base_cost) * additions;
        let emissions = (init.emissions * demand * (100.0 - share) / (100.0 - s0)).max(0.0);
        trajectory.push(TrajectoryPoint {
            year,
            renewable_share: share,
            emissions,
            investment,
            jobs: config.employment_factor * investment,
        });
        diagnostics.carbon_price.push(config.carbon_price(year));
        diagnostics.fossil_cost.push(fossil);
        diagnostics.clean_cost.push(clean);
    }

    let cumulative_emissions = trapezoid(trajectory.iter().map(|p| p.emissions));
    let econ = config.economy;
    let gdp_growth = 1.0 + econ.gdp_growth / 100.0;
    let total_gdp: f64 = (0..trajectory.len()).map(|i| econ.world_gdp * gdp_growth.powi(i as i32)).sum();
    let total_investment: f64 = trajectory.iter().map(|p| p.investment).sum();
    let gdp_impact_pct = econ.gdp_response * 100.0 * total_investment / total_gdp;
    let stranded_assets = config.stranded_asset_factor * ((share - s0) / 100.0).max(0.0);

    Ok(ScenarioResult {
        name: config.name.clone(),
        trajectory,
        cumulative_emissions,
        gdp_impact_pct,
        stranded_assets,
        diagnostics,
    })
}

pub const TRAJECTORY_HEADER: &str = "year,renewable_share,emissions,investment,jobs";

/// Plot-data rows at full precision.
pub fn trajectory_csv(result: &ScenarioResult) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for p in &result.trajectory {
        out.push_str(&format!("{},{},{},{},{}\n", p.year, p.renewable_share, p.emissions, p.investment, p.jobs));
    }
    out
}

pub fn parse_trajectory_csv(text: &str) -> Result<Vec<TrajectoryPoint>, ScenarioError> {
    let mut lines = text.lines();
    if lines.next() != Some(TRAJECTORY_HEADER) {
        return Err(ScenarioError::Parse(format!("expected header `{TRAJECTORY_HEADER}`")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let cells: Vec<&str> = line.split(',').collect();
            let bad = || ScenarioError::Parse(format!("row {}: `{line}`", i + 1));
            if cells.len() != 5 {
                return Err(bad());
            }
            let num = |j: usize| cells[j].parse::<f64>().map_err(|_| bad());
            Ok(TrajectoryPoint {
                year: cells[0].parse().map_err(|_| bad())?,
                renewable_share: num(1)?,
                emissions: num(2)?,
                investment: num(3)?,
                jobs: num(4)?,
            })
        })
        .collect()
}
