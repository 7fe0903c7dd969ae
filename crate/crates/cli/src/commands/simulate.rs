use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use enerinvest::par::{self, Execution};
use enerinvest::scenario::{compare, simulate, trajectory_csv, ScenarioConfig, ScenarioResult};

use super::read_input;
use crate::error::{CliError, CliResult};
use crate::output::{slug, Artifacts, RunInputs};

pub fn load_scenario(path: &Path) -> CliResult<ScenarioConfig> {
    ScenarioConfig::from_toml_str(&read_input(path)?)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn summary_text(results: &[ScenarioResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0).max("Scenario".len());
    let end = results.first().map_or(0, |r| r.end_year());
    let mut out = format!(
        "Scenario endpoints ({end})\n{:<width$}  {:>10}  {:>12}  {:>12}  {:>10}  {:>14}  {:>10}  {:>13}\n",
        "Scenario", "Share (%)", "CO2 (Gt/yr)", "Invest. (T)", "Jobs (M)", "Cumul. CO2 Gt", "GDP (%)", "Stranded (T)"
    );
    for r in results {
        let e = r.end();
        let _ = writeln!(
            out,
            "{:<width$}  {:>10.4}  {:>12.4}  {:>12.4}  {:>10.4}  {:>14.4}  {:>10.4}  {:>13.4}",
            r.name,
            e.renewable_share,
            e.emissions,
            e.investment,
            e.jobs,
            r.cumulative_emissions,
            r.gdp_impact_pct,
            r.stranded_assets
        );
    }
    for r in results.iter().filter(|r| !r.diagnostics.clamped_years.is_empty()) {
        let _ = writeln!(out, "  note: {} adoption step clamped at the ceiling in {:?}", r.name, r.diagnostics.clamped_years);
    }
    out
}

pub fn run(
    paths: &[PathBuf],
    start_year: Option<i32>,
    end_year: Option<i32>,
    inputs: &mut RunInputs,
) -> CliResult<Artifacts> {
    if paths.is_empty() {
        return Err(CliError::input("at least one scenario configuration is required"));
    }
    if let Some(y) = start_year {
        inputs.option("start_year", y);
    }
    if let Some(y) = end_year {
        inputs.option("end_year", y);
    }
    let mut configs = Vec::with_capacity(paths.len());
    for p in paths {
        inputs.path(p);
        let mut c = load_scenario(p)?;
        c.start_year = start_year.unwrap_or(c.start_year);
        c.end_year = end_year.unwrap_or(c.end_year);
        c.validate().map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
        configs.push(c);
    }
    let mut seen = BTreeSet::new();
    for c in &configs {
        if !seen.insert(slug(&c.name)) {
            return Err(CliError::input(format!("scenario name `{}` is used twice", c.name)));
        }
    }

    let results =
        par::map(Execution::default(), &configs, simulate).into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut artifacts = Artifacts::new("scenarios.txt");
    artifacts.report = summary_text(&results);
    for r in &results {
        artifacts.add_csv(format!("trajectory_{}.csv", slug(&r.name)), trajectory_csv(r));
    }
    let mut summary = String::from(
        "scenario,start_year,end_year,renewable_share,emissions,investment,jobs,cumulative_emissions,gdp_impact_pct,stranded_assets\n",
    );
    for r in &results {
        let e = r.end();
        let _ = writeln!(
            summary,
            "{},{},{},{},{},{},{},{},{},{}",
            r.name,
            r.start_year(),
            r.end_year(),
            e.renewable_share,
            e.emissions,
            e.investment,
            e.jobs,
            r.cumulative_emissions,
            r.gdp_impact_pct,
            r.stranded_assets
        );
    }
    artifacts.add_csv("scenario_summary.csv", summary);

    if results.len() >= 2 {
        let cmp = compare(&results).map_err(|e| CliError::input(e.to_string()))?;
        let mut text = String::from("\nComparison (first minus second)\n");
        let mut csv = String::from(
            "first,second,cumulative_emissions_gap,end_share_delta,end_emissions_delta,end_investment_delta,end_jobs_delta\n",
        );
        for g in &cmp.pairs {
            let _ = writeln!(
                text,
                "  {} vs {}: cumulative CO2 {:+.4} Gt, end share {:+.4} pp, end CO2 {:+.4} Gt, investment {:+.4} T, jobs {:+.4} M",
                g.first,
                g.second,
                g.cumulative_emissions_gap,
                g.end_share_delta,
                g.end_emissions_delta,
                g.end_investment_delta,
                g.end_jobs_delta
            );
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                g.first,
                g.second,
                g.cumulative_emissions_gap,
                g.end_share_delta,
                g.end_emissions_delta,
                g.end_investment_delta,
                g.end_jobs_delta
            );
        }
        text.push_str("Ranking by cumulative emissions (lowest first)\n");
        let mut ranking = String::from("rank,scenario,cumulative_emissions\n");
        for (i, (name, total)) in cmp.ranking.iter().enumerate() {
            let _ = writeln!(text, "  {}. {name} ({total:.4} Gt)", i + 1);
            let _ = writeln!(ranking, "{},{name},{total}", i + 1);
        }
        artifacts.report.push_str(&text);
        artifacts.add_csv("comparison.csv", csv);
        artifacts.add_csv("ranking.csv", ranking);
    }
    Ok(artifacts)
}
