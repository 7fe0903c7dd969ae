use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use enerinvest::appraisal::{
    adjusted_cost, irr, learning_cost, npv, project_value, real_option_value, CarbonCostParams, CashFlowSchedule,
    IrrWarning, LearningCurve, RealOptionSpec,
};

use super::{parse_toml, read_input};
use crate::error::CliResult;
use crate::output::{Artifacts, RunInputs};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AppraisalFile {
    schema_version: u32,
    project: ProjectSection,
    real_option: Option<RealOptionSpec>,
    carbon_cost: Option<CarbonCostParams>,
    learning_curve: Option<LearningSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectSection {
    initial_investment: f64,
    cash_flows: Vec<f64>,
    discount_rate: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LearningSection {
    base_cost: f64,
    learning_rate: f64,
    base_capacity: f64,
    /// Cumulative capacities at which to project unit cost.
    projection_capacities: Vec<f64>,
}

pub fn run(config: &Path, inputs: &mut RunInputs) -> CliResult<Artifacts> {
    inputs.path(config);
    let file: AppraisalFile = parse_toml(config, &read_input(config)?)?;
    super::check_schema(config, file.schema_version)?;

    let p = &file.project;
    let schedule = CashFlowSchedule::new(p.initial_investment, p.cash_flows.clone(), p.discount_rate)?;
    let npv_value = npv(&schedule);
    let irr_solution = irr(&schedule)?;
    let rov = file.real_option.as_ref().map(real_option_value).transpose()?;
    let total = project_value(npv_value, rov.unwrap_or(0.0))?;
    let carbon = file
        .carbon_cost
        .map(|c| CarbonCostParams::new(c.private_cost, c.carbon_price, c.emission_factor).map(|c| (c, adjusted_cost(&c))))
        .transpose()?;
    let learning = match &file.learning_curve {
        Some(l) => {
            let curve = LearningCurve::new(l.base_cost, l.learning_rate, l.base_capacity)?;
            let costs = l
                .projection_capacities
                .iter()
                .map(|&c| learning_cost(&curve, c).map(|v| (c, v)))
                .collect::<Result<Vec<_>, _>>()?;
            Some((curve, costs))
        }
        None => None,
    };

    let mut text = String::new();
    let _ = writeln!(text, "Investment appraisal: {}", config.display());
    let _ = writeln!(
        text,
        "  I0 = {:.4}, {} periods, discount rate {:.4}",
        schedule.initial_investment(),
        schedule.horizon(),
        schedule.discount_rate()
    );
    let _ = writeln!(text, "{:<28}{:>14.4}", "NPV", npv_value);
    let _ = writeln!(text, "{:<28}{:>13.4}%", "IRR", 100.0 * irr_solution.rate);
    for w in &irr_solution.warnings {
        let note = match w {
            IrrWarning::MultipleSignChanges => "cash flows change sign more than once",
            IrrWarning::MultipleRoots => "several roots in the search bracket; smallest reported",
        };
        let _ = writeln!(text, "  warning: {note}");
    }
    match (&file.real_option, rov) {
        (Some(spec), Some(v)) => {
            let _ = writeln!(text, "{:<28}{:>14.4}", "ROV", v);
            let _ = writeln!(
                text,
                "  {:?}, V0 {:.4}, sigma {:.4}, rf {:.4}, {} steps",
                spec.option, spec.underlying_value, spec.volatility, spec.risk_free_rate, spec.steps
            );
        }
        _ => {
            let _ = writeln!(text, "{:<28}{:>14}", "ROV", "none");
        }
    }
    let _ = writeln!(text, "{:<28}{:>14.4}", "Total value V = NPV + ROV", total);
    if let Some((c, cost)) = carbon {
        let _ = writeln!(text, "{:<28}{:>14.4}", "Carbon-adjusted cost", cost);
        let _ = writeln!(
            text,
            "  private {:.4} + {:.4} x {:.4}",
            c.private_cost, c.carbon_price, c.emission_factor
        );
    }
    if let Some((curve, costs)) = &learning {
        let _ = writeln!(
            text,
            "Learning curve (LR {:.4}, base cost {:.4} at capacity {:.4})",
            curve.learning_rate(),
            curve.base_cost(),
            curve.base_capacity()
        );
        let _ = writeln!(text, "  {:>14}  {:>14}", "capacity", "unit cost");
        for (c, v) in costs {
            let _ = writeln!(text, "  {c:>14.4}  {v:>14.4}");
        }
    }

    let mut csv = String::from("metric,value\n");
    let mut row = |k: &str, v: f64| {
        let _ = writeln!(csv, "{k},{v}");
    };
    row("npv", npv_value);
    row("irr", irr_solution.rate);
    if let Some(v) = rov {
        row("rov", v);
    }
    row("total_value", total);
    if let Some((_, cost)) = carbon {
        row("carbon_adjusted_cost", cost);
    }

    let mut artifacts = Artifacts::new("appraisal.txt");
    artifacts.report = text;
    artifacts.add_csv("appraisal.csv", csv);
    if let Some((_, costs)) = learning {
        let mut lc = String::from("cumulative_capacity,unit_cost\n");
        for (c, v) in costs {
            let _ = writeln!(lc, "{c},{v}");
        }
        artifacts.add_csv("learning_curve.csv", lc);
    }
    Ok(artifacts)
}
