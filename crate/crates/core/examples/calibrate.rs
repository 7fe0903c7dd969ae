//! Derives the three shipped scenario calibrations by deterministic bisection
//! and writes them to `fixtures/scenarios/`.
//!
//! Targets (2050): Ambitious share 92.5 %, emissions 8.2 Gt, investment 8.0 T,
//! jobs 72.8 M, GDP impact 3.2 %, stranded assets 3.0 T; BAU emissions 46.2 Gt;
//! Conservative emissions 52.5 Gt. Demand growth is shared by all scenarios and
//! follows from the Ambitious share and emissions endpoints.

use enerinvest::scenario::{
    simulate, DynamicsParams, EconomyParams, InitialState, PriceAnchor, ScenarioConfig, TechnologyParams,
    SCHEMA_VERSION,
};

const START: i32 = 2025;
const END: i32 = 2050;
const S0: f64 = 35.0;
const E0: f64 = 37.4;
const INV0: f64 = 2.0;
const JOBS0: f64 = 16.2;

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let rising = f(hi) > f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn path(points: &[(i32, f64)]) -> Vec<PriceAnchor> {
    points.iter().map(|&(year, price)| PriceAnchor { year, price }).collect()
}

fn end_state(c: &ScenarioConfig) -> (f64, f64) {
    let r = simulate(c).expect("calibration configs are valid");
    (r.end().renewable_share, r.end().investment)
}

/// Share that yields `emissions` in the end year under the common demand path.
fn share_for(emissions: f64, demand: f64) -> f64 {
    100.0 - emissions * (100.0 - S0) / (E0 * demand)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let horizon = END - START;
    let demand = 8.2 * (100.0 - S0) / (E0 * (100.0 - 92.5));
    let demand_growth = 100.0 * (demand.powf(1.0 / horizon as f64) - 1.0);

    let template = |name: &str, learning_rate: f64, stringency: f64, ceiling: f64, prices: &[(i32, f64)]| ScenarioConfig {
        schema_version: SCHEMA_VERSION,
        name: name.into(),
        start_year: START,
        end_year: END,
        learning_rate,
        policy_stringency: stringency,
        adoption_ceiling: ceiling,
        demand_growth,
        employment_factor: 72.8 / 8.0,
        stranded_asset_factor: 3.0 / ((92.5 - S0) / 100.0),
        initial_state: InitialState { renewable_share: S0, emissions: E0, annual_investment: INV0, jobs: JOBS0 },
        carbon_price_path: path(prices),
        technology: TechnologyParams {
            fossil_private_cost: 60.0,
            fossil_emission_factor: 0.8,
            clean_base_cost: 85.0,
            base_cumulative_capacity: 600.0,
        },
        dynamics: DynamicsParams { adoption_rate: 1.0, replacement_rate: 0.05 },
        economy: EconomyParams { world_gdp: 110.0, gdp_growth: 2.5, gdp_response: 1.0 },
    };

    // Ambitious: adoption rate matches the share, replacement rate the investment.
    let mut ambitious = template("Ambitious", 0.20, 1.0, 95.0, &[(2025, 40.0), (2030, 90.0), (2050, 200.0)]);
    let fit_adoption = |c: &mut ScenarioConfig| {
        let rate = bisect(1e-4, 50.0, |a| {
            let mut t = c.clone();
            t.dynamics.adoption_rate = a;
            end_state(&t).0 - 92.5
        });
        c.dynamics.adoption_rate = rate;
    };
    let rho = bisect(0.01, 0.08, |rho| {
        let mut t = ambitious.clone();
        t.dynamics.replacement_rate = rho;
        fit_adoption(&mut t);
        end_state(&t).1 - 8.0
    });
    ambitious.dynamics.replacement_rate = rho;
    fit_adoption(&mut ambitious);
    let result = simulate(&ambitious)?;
    ambitious.economy.gdp_response = 3.2 / result.gdp_impact_pct;
    let dynamics = ambitious.dynamics;
    let economy = ambitious.economy;

    // BAU and Conservative share the dynamics and economy; their 2050 carbon
    // price matches the emissions endpoint.
    let fit_price = |mut c: ScenarioConfig, emissions: f64| {
        c.dynamics = dynamics;
        c.economy = economy;
        let target = share_for(emissions, demand);
        let price = bisect(0.0, 400.0, |p| {
            let mut t = c.clone();
            t.carbon_price_path.last_mut().unwrap().price = p;
            end_state(&t).0 - target
        });
        c.carbon_price_path.last_mut().unwrap().price = price;
        c
    };
    let bau = fit_price(template("BAU", 0.15, 0.6, 80.0, &[(2025, 30.0), (2050, 100.0)]), 46.2);
    let conservative = fit_price(template("Conservative", 0.12, 0.55, 80.0, &[(2025, 25.0), (2050, 90.0)]), 52.5);

    let dir = enerinvest::fixture_dir().join("scenarios");
    std::fs::create_dir_all(&dir)?;
    for (file, config) in [("ambitious.toml", &ambitious), ("bau.toml", &bau), ("conservative.toml", &conservative)] {
        let r = simulate(config)?;
        let header = "# Generated by `cargo run -p enerinvest-core --example calibrate`.\n";
        std::fs::write(dir.join(file), format!("{header}{}", config.to_toml_string()))?;
        let end = r.end();
        println!(
            "{:<13} share {:>7.3}  emissions {:>7.3}  investment {:>6.3}  jobs {:>6.2}  cumulative {:>8.2}  gdp {:>5.2}%  stranded {:>5.2}",
            config.name, end.renewable_share, end.emissions, end.investment, end.jobs, r.cumulative_emissions,
            r.gdp_impact_pct, r.stranded_assets
        );
    }
    Ok(())
}
