//! Deterministic synthetic panel matching target descriptive moments.
//!
//! The underlying country-level data are not public, so the shipped fixture is
//! synthesised: regressors get country levels, trends and idiosyncratic noise,
//! outcomes are generated from the final regressors through a two-way effects
//! model with planted signs, and every variable is then mapped onto its target
//! mean and standard deviation. Positive-support variables use a power map
//! `c * x^p` (preserves zeros, positivity and log-linearity); bounded variables
//! use an affine map with clamping to the target range.
//!
//! `cargo run -p enerinvest-core --example generate_panel_fixture` rewrites
//! `fixtures/panel_fixture.csv` from this module.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{PanelDataset, PanelObservation, Variable};

pub const FIXTURE_SEED: u64 = 20_100_223;
pub const FIRST_YEAR: i32 = 2010;
pub const N_YEARS: usize = 14;

/// Target moments (mean, std dev, min, max) the fixture is calibrated to.
#[derive(Debug, Clone, Copy)]
pub struct TargetMoments {
    pub variable: Variable,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
}

pub const TARGETS: [TargetMoments; 8] = [
    TargetMoments { variable: Variable::Investment, mean: 35.82, std_dev: 52.48, min: 1.50, max: 318.50 },
    TargetMoments { variable: Variable::GdpGrowth, mean: 2.18, std_dev: 3.25, min: -10.80, max: 10.60 },
    TargetMoments { variable: Variable::Co2Emissions, mean: 1852.35, std_dev: 2845.62, min: 25.00, max: 11850.00 },
    TargetMoments { variable: Variable::CarbonPrice, mean: 18.52, std_dev: 25.38, min: 0.00, max: 85.20 },
    TargetMoments { variable: Variable::PolicyIndex, mean: 68.25, std_dev: 14.82, min: 45.00, max: 96.00 },
    TargetMoments { variable: Variable::TechIndex, mean: 81.52, std_dev: 10.25, min: 45.00, max: 97.00 },
    TargetMoments { variable: Variable::RenewableShare, mean: 28.45, std_dev: 15.82, min: 2.50, max: 85.80 },
    TargetMoments { variable: Variable::EnergyIntensity, mean: 0.105, std_dev: 0.045, min: 0.025, max: 0.195 },
];

pub fn target(var: Variable) -> TargetMoments {
    *TARGETS.iter().find(|t| t.variable == var).expect("all variables have targets")
}

struct Country {
    code: &'static str,
    log_investment: f64,
    investment_trend: f64,
    /// Year index from which carbon pricing applies; `None` for never.
    carbon_start: Option<usize>,
    carbon_level: f64,
    policy: f64,
    tech: f64,
    intensity: f64,
    log_co2: f64,
    share: f64,
}

#[rustfmt::skip]
const COUNTRIES: [Country; 15] = [
    Country { code: "AUS", log_investment: 1.9, investment_trend: 0.10, carbon_start: Some(2),  carbon_level: 12.0, policy: 55.0, tech: 78.0, intensity: 0.13, log_co2: 5.99, share: 10.0 },
    Country { code: "BRA", log_investment: 2.3, investment_trend: 0.07, carbon_start: None,     carbon_level: 0.0,  policy: 52.0, tech: 62.0, intensity: 0.10, log_co2: 6.11, share: 46.0 },
    Country { code: "CAN", log_investment: 1.8, investment_trend: 0.08, carbon_start: Some(8),  carbon_level: 18.0, policy: 62.0, tech: 84.0, intensity: 0.17, log_co2: 6.31, share: 30.0 },
    Country { code: "CHN", log_investment: 4.4, investment_trend: 0.14, carbon_start: Some(11), carbon_level: 6.0,  policy: 58.0, tech: 80.0, intensity: 0.18, log_co2: 9.30, share: 12.0 },
    Country { code: "DEU", log_investment: 3.0, investment_trend: 0.06, carbon_start: Some(0),  carbon_level: 14.0, policy: 80.0, tech: 92.0, intensity: 0.07, log_co2: 6.55, share: 20.0 },
    Country { code: "DNK", log_investment: 0.5, investment_trend: 0.07, carbon_start: Some(0),  carbon_level: 22.0, policy: 86.0, tech: 90.0, intensity: 0.05, log_co2: 3.40, share: 42.0 },
    Country { code: "ESP", log_investment: 2.1, investment_trend: 0.08, carbon_start: Some(0),  carbon_level: 12.0, policy: 72.0, tech: 80.0, intensity: 0.08, log_co2: 5.58, share: 25.0 },
    Country { code: "FRA", log_investment: 2.4, investment_trend: 0.07, carbon_start: Some(0),  carbon_level: 14.0, policy: 74.0, tech: 88.0, intensity: 0.08, log_co2: 5.80, share: 16.0 },
    Country { code: "GBR", log_investment: 2.6, investment_trend: 0.06, carbon_start: Some(0),  carbon_level: 16.0, policy: 78.0, tech: 90.0, intensity: 0.06, log_co2: 6.05, share: 14.0 },
    Country { code: "IND", log_investment: 2.6, investment_trend: 0.13, carbon_start: None,     carbon_level: 0.0,  policy: 50.0, tech: 66.0, intensity: 0.14, log_co2: 7.75, share: 11.0 },
    Country { code: "ITA", log_investment: 2.0, investment_trend: 0.05, carbon_start: Some(0),  carbon_level: 12.0, policy: 66.0, tech: 82.0, intensity: 0.07, log_co2: 5.88, share: 22.0 },
    Country { code: "JPN", log_investment: 3.0, investment_trend: 0.06, carbon_start: Some(2),  carbon_level: 3.0,  policy: 64.0, tech: 94.0, intensity: 0.08, log_co2: 7.05, share: 9.0 },
    Country { code: "KOR", log_investment: 1.9, investment_trend: 0.09, carbon_start: Some(5),  carbon_level: 15.0, policy: 66.0, tech: 93.0, intensity: 0.12, log_co2: 6.42, share: 4.0 },
    Country { code: "MEX", log_investment: 1.3, investment_trend: 0.08, carbon_start: Some(4),  carbon_level: 2.0,  policy: 50.0, tech: 68.0, intensity: 0.09, log_co2: 6.10, share: 12.0 },
    Country { code: "USA", log_investment: 4.0, investment_trend: 0.08, carbon_start: None,     carbon_level: 0.0,  policy: 60.0, tech: 95.0, intensity: 0.11, log_co2: 8.55, share: 13.0 },
];

type Grid = Vec<Vec<f64>>;

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample::<f64, _>(StandardNormal)
}

fn flatten(grid: &Grid) -> Vec<f64> {
    grid.iter().flatten().copied().collect()
}

fn map_grid(grid: &Grid, f: impl Fn(f64) -> f64) -> Grid {
    grid.iter().map(|row| row.iter().map(|v| f(*v)).collect()).collect()
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Two-way demeaned copy of a balanced country × year grid.
fn two_way_residual(grid: &Grid) -> Grid {
    let nc = grid.len();
    let nt = grid[0].len();
    let grand = flatten(grid).iter().sum::<f64>() / (nc * nt) as f64;
    let row_means: Vec<f64> = grid.iter().map(|r| r.iter().sum::<f64>() / nt as f64).collect();
    let col_means: Vec<f64> =
        (0..nt).map(|t| grid.iter().map(|r| r[t]).sum::<f64>() / nc as f64).collect();
    (0..nc)
        .map(|i| (0..nt).map(|t| grid[i][t] - row_means[i] - col_means[t] + grand).collect())
        .collect()
}

fn within_sd(grid: &Grid) -> f64 {
    mean_sd(&flatten(&two_way_residual(grid))).1
}

/// `c * x^p` clamped to the target range, with `p` and `c` chosen so the
/// clamped values carry the target mean and standard deviation. Requires
/// non-negative data with some positive entries.
fn power_map(grid: &Grid, target: TargetMoments) -> Grid {
    let values = flatten(grid);
    let apply = |v: f64, c: f64, p: f64| (c * v.powf(p)).clamp(target.min, target.max);
    // Scale matching the mean for a given exponent; the clamped mean is
    // monotone in `c`.
    let scale_for = |p: f64| {
        let mean = |c: f64| values.iter().map(|v| apply(*v, c, p)).sum::<f64>() / values.len() as f64;
        let base = target.mean / mean_sd(&values.iter().map(|v| v.powf(p)).collect::<Vec<_>>()).0;
        let (mut lo, mut hi) = (base * 1e-3, base * 1e3);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if mean(mid) < target.mean {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo * hi).sqrt()
    };
    let sd_for = |p: f64| {
        let c = scale_for(p);
        mean_sd(&values.iter().map(|v| apply(*v, c, p)).collect::<Vec<_>>()).1
    };
    let (mut lo, mut hi) = (0.01, 10.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if sd_for(mid) < target.std_dev {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let c = scale_for(p);
    map_grid(grid, |v| apply(v, c, p))
}

/// Affine map onto the target mean/sd, clamped to [min, max], iterated so the
/// clamped result still carries the target moments.
fn affine_map(grid: &Grid, target: TargetMoments) -> Grid {
    let mut current = grid.clone();
    for _ in 0..60 {
        let (m, s) = mean_sd(&flatten(&current));
        current = map_grid(&current, |v| {
            (target.mean + target.std_dev * (v - m) / s).clamp(target.min, target.max)
        });
    }
    current
}

fn round_to(v: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (v * scale).round() / scale
}

/// Builds the fixture from `seed`. The shipped file uses [`FIXTURE_SEED`].
pub fn synthesize_panel(seed: u64) -> PanelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nc = COUNTRIES.len();
    let nt = N_YEARS;
    let grid = || vec![vec![0.0; nt]; nc];
    let (mut inv, mut cp, mut pol, mut tech, mut ei) = (grid(), grid(), grid(), grid(), grid());

    for (i, c) in COUNTRIES.iter().enumerate() {
        for t in 0..nt {
            let tf = t as f64;
            inv[i][t] = (c.log_investment + c.investment_trend * tf + 0.30 * normal(&mut rng)).exp();
            cp[i][t] = match c.carbon_start {
                Some(start) if t >= start => {
                    let years = (t - start) as f64;
                    c.carbon_level * (1.0 + 0.11 * years) * (0.25 * normal(&mut rng)).exp()
                }
                _ => 0.0,
            };
            pol[i][t] = c.policy + 1.4 * tf + 3.0 * normal(&mut rng);
            tech[i][t] = c.tech + 0.5 * tf + 2.5 * normal(&mut rng);
            ei[i][t] = c.intensity * (-0.03 * tf).exp() * (0.08 * normal(&mut rng)).exp();
        }
    }

    let inv = power_map(&inv, target(Variable::Investment));
    let cp = power_map(&cp, target(Variable::CarbonPrice));
    let pol = affine_map(&pol, target(Variable::PolicyIndex));
    let tech = affine_map(&tech, target(Variable::TechIndex));
    let ei = affine_map(&ei, target(Variable::EnergyIntensity));
    let log_inv = map_grid(&inv, f64::ln);

    // Outcome effects are planted per within-standard-deviation of each
    // regressor, so every sign is identified with comparable strength.
    let regressors = [&log_inv, &cp, &pol, &tech, &ei];
    let scales: Vec<f64> = regressors.iter().map(|g| 1.0 / within_sd(g)).collect();
    let outcome = |rng: &mut ChaCha8Rng, signs: [f64; 5], strength: f64, country: &dyn Fn(usize) -> f64, year: &dyn Fn(usize) -> f64| {
        let mut out = vec![vec![0.0; nt]; nc];
        for i in 0..nc {
            for t in 0..nt {
                let signal: f64 = (0..5).map(|k| signs[k] * strength * scales[k] * regressors[k][i][t]).sum();
                out[i][t] = country(i) + year(t) + signal + normal(rng);
            }
        }
        out
    };

    let covid = |t: usize| match FIRST_YEAR + t as i32 {
        2020 => -9.0,
        2021 => 3.5,
        2012 | 2019 => -0.8,
        _ => 0.0,
    };
    let gdp_country: Vec<f64> = (0..nc).map(|_| 2.0 * normal(&mut rng)).collect();
    let gdp = outcome(&mut rng, [1.0, 1.0, 1.0, 1.0, -1.0], 0.5, &|i| gdp_country[i], &covid);
    let gdp = affine_map(&gdp, target(Variable::GdpGrowth));

    let co2_log = outcome(
        &mut rng,
        [-1.0, -1.0, -1.0, -1.0, 1.0],
        0.5,
        &|i| COUNTRIES[i].log_co2 / 0.1,
        &|t| if FIRST_YEAR + t as i32 == 2020 { -0.6 } else { 0.0 },
    );
    // The 0.1 factor keeps the noise at a realistic few percent of emissions.
    let co2 = map_grid(&co2_log, |v| (0.1 * v).exp());
    let co2 = power_map(&co2, target(Variable::Co2Emissions));

    let share = outcome(
        &mut rng,
        [1.0, 1.0, 1.0, 1.0, -1.0],
        0.5,
        &|i| COUNTRIES[i].share / 2.0,
        &|t| 0.6 * t as f64,
    );
    let share = affine_map(&share, target(Variable::RenewableShare));

    let mut observations = Vec::with_capacity(nc * nt);
    for (i, c) in COUNTRIES.iter().enumerate() {
        for t in 0..nt {
            observations.push(PanelObservation {
                country: c.code.to_string(),
                year: FIRST_YEAR + t as i32,
                investment: round_to(inv[i][t], 4).max(1e-4),
                gdp_growth: round_to(gdp[i][t], 4),
                co2_emissions: round_to(co2[i][t], 3),
                carbon_price: round_to(cp[i][t], 4),
                policy_index: round_to(pol[i][t], 4),
                tech_index: round_to(tech[i][t], 4),
                renewable_share: round_to(share[i][t], 4),
                energy_intensity: round_to(ei[i][t], 6),
            });
        }
    }
    PanelDataset::new(observations).expect("synthetic rows satisfy the domain constraints")
}

/// Linear data-generating process for Monte Carlo work on the baseline
/// specification: GDP growth on log investment, carbon price, policy index,
/// technology index and energy intensity, plus country and year effects.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDgp {
    pub n_countries: usize,
    pub n_years: usize,
    /// One coefficient per baseline regressor, in order.
    pub coefficients: [f64; 5],
    pub country_effect_sd: f64,
    pub year_effect_sd: f64,
    pub noise_sd: f64,
    /// Loading of every regressor on the standardised country effect. Zero
    /// gives a random-effects design; nonzero correlates effects and regressors.
    pub effect_correlation: f64,
    /// Standard deviation of a persistent country-level regressor component
    /// drawn independently of the country effect.
    pub regressor_country_sd: f64,
}

impl PanelDgp {
    pub fn new(n_countries: usize, n_years: usize, coefficients: [f64; 5]) -> Self {
        PanelDgp {
            n_countries,
            n_years,
            coefficients,
            country_effect_sd: 1.0,
            year_effect_sd: 0.5,
            noise_sd: 1.0,
            effect_correlation: 0.0,
            regressor_country_sd: 0.0,
        }
    }

    /// One-way random-effects panel, 15 countries by 14 years. Regressors
    /// carry a persistent country component independent of the effect, which
    /// gives the between regression enough signal for the feasible GLS weight
    /// to be estimated tightly.
    pub fn random_effects_design() -> Self {
        PanelDgp {
            year_effect_sd: 0.0,
            regressor_country_sd: 4.0,
            ..PanelDgp::new(15, 14, [1.0, 0.02, 0.01, 0.05, -2.0])
        }
    }

    /// As [`PanelDgp::random_effects_design`] but with a large country effect
    /// loaded onto every regressor.
    pub fn correlated_effects_design() -> Self {
        PanelDgp { country_effect_sd: 6.0, effect_correlation: 6.0, ..PanelDgp::random_effects_design() }
    }
}

/// Draws one balanced panel from `dgp`. Only the baseline regressors and GDP
/// growth carry signal; the other columns hold valid filler.
pub fn generate_panel(dgp: &PanelDgp, rng: &mut impl Rng) -> PanelDataset {
    let mut draw = || rng.sample::<f64, _>(StandardNormal);
    let effects: Vec<f64> = (0..dgp.n_countries).map(|_| draw()).collect();
    let levels: Vec<[f64; 5]> = (0..dgp.n_countries).map(|_| std::array::from_fn(|_| draw())).collect();
    let shocks: Vec<f64> = (0..dgp.n_years).map(|_| draw()).collect();
    let mut observations = Vec::with_capacity(dgp.n_countries * dgp.n_years);
    for (i, &a) in effects.iter().enumerate() {
        for (t, &g) in shocks.iter().enumerate() {
            let mut z = |k: usize| dgp.effect_correlation * a + dgp.regressor_country_sd * levels[i][k] + draw();
            let log_investment = 3.0 + 0.5 * z(0);
            let carbon_price = (20.0 + 6.0 * z(1)).max(0.0);
            let policy_index = (60.0 + 8.0 * z(2)).clamp(0.0, 100.0);
            let tech_index = (75.0 + 6.0 * z(3)).clamp(0.0, 100.0);
            let energy_intensity = (0.1f64.ln() + 0.2 * z(4)).exp();
            let x = [log_investment, carbon_price, policy_index, tech_index, energy_intensity];
            let signal: f64 = x.iter().zip(&dgp.coefficients).map(|(x, b)| x * b).sum();
            let gdp_growth =
                signal + dgp.country_effect_sd * a + dgp.year_effect_sd * g + dgp.noise_sd * draw();
            observations.push(PanelObservation {
                country: format!("C{i:03}"),
                year: FIRST_YEAR + t as i32,
                investment: log_investment.exp(),
                gdp_growth,
                co2_emissions: 100.0,
                carbon_price,
                policy_index,
                tech_index,
                renewable_share: 30.0,
                energy_intensity,
            });
        }
    }
    PanelDataset::new(observations).expect("generated rows satisfy the domain constraints")
}
