use std::fmt::Write as _;
use std::path::Path;

use enerinvest::ablation::{parse_ablation_csv, run_ablation_fixture};
use enerinvest::data::{case_studies, summarize};
use enerinvest::econometrics::{Estimator, RegressionResult};
use enerinvest::stats::significance_stars;

use super::read_input;
use super::regress::{fit_all, load_dataset, specs, RegressOptions};
use crate::error::{CliError, CliResult};
use crate::output::{Artifacts, RunInputs};

fn descriptive_section(out: &mut String, csv: &mut String, dataset: &enerinvest::data::PanelDataset) -> CliResult<()> {
    let stats = summarize(dataset)?;
    out.push_str("## Descriptive statistics\n\n");
    out.push_str("| Variable | Mean | Std. Dev. | Min | Max | N |\n|---|---:|---:|---:|---:|---:|\n");
    csv.push_str("variable,mean,std_dev,min,max,n\n");
    for s in &stats.variables {
        let _ = writeln!(
            out,
            "| {} | {:.4} | {:.4} | {:.4} | {:.4} | {} |",
            s.variable.label(),
            s.mean,
            s.std_dev,
            s.min,
            s.max,
            s.count
        );
        let _ = writeln!(csv, "{},{},{},{},{},{}", s.variable, s.mean, s.std_dev, s.min, s.max, s.count);
    }
    out.push('\n');
    Ok(())
}

fn regression_section(out: &mut String, results: &[RegressionResult]) {
    out.push_str("## Panel regression results\n\n|   |");
    for (i, r) in results.iter().enumerate() {
        let _ = write!(out, " ({}) {} |", i + 1, r.dependent);
    }
    out.push_str("\n|---|");
    out.push_str(&"---:|".repeat(results.len()));
    out.push('\n');
    let mut names: Vec<&String> = Vec::new();
    for r in results {
        for n in &r.names {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    for name in names {
        let mut coef = format!("| {name} |");
        let mut se = String::from("|   |");
        for r in results {
            match r.index_of(name) {
                Some(j) => {
                    let _ = write!(coef, " {:.4}{} |", r.coefficients[j], significance_stars(r.p_values[j]));
                    let _ = write!(se, " ({:.4}) |", r.std_errors[j]);
                }
                None => {
                    coef.push_str("   |");
                    se.push_str("   |");
                }
            }
        }
        let _ = writeln!(out, "{coef}\n{se}");
    }
    let mut row = |label: &str, cell: &dyn Fn(&RegressionResult) -> String| {
        let _ = write!(out, "| {label} |");
        for r in results {
            let _ = write!(out, " {} |", cell(r));
        }
        out.push('\n');
    };
    let yes_no = |b: bool| if b { "Yes" } else { "No" }.to_string();
    row("Country FE", &|r| match r.estimator {
        Estimator::FixedEffects { country, .. } => yes_no(country),
        Estimator::RandomEffects(_) => "RE".into(),
    });
    row("Year FE", &|r| match r.estimator {
        Estimator::FixedEffects { year, .. } => yes_no(year),
        Estimator::RandomEffects(_) => "No".into(),
    });
    row("Observations", &|r| r.n_observations.to_string());
    row("R-squared", &|r| format!("{:.4}", r.r_squared));
    row("F-statistic", &|r| format!("{:.4}{}", r.f_statistic, significance_stars(r.f_p_value)));
    out.push_str("\nStandard errors in parentheses. *** p<0.01, ** p<0.05, * p<0.1\n\n");
}

fn case_study_section(out: &mut String) {
    out.push_str("## Case-study indicators (2023)\n\n");
    out.push_str("| Economy | Capacity (GW) | Share (%) | Investment (B) | Carbon price (USD/t) | Jobs (k) | Grid stability |\n");
    out.push_str("|---|---:|---:|---:|---:|---:|---:|\n");
    for c in case_studies() {
        let _ = writeln!(
            out,
            "| {} | {:.1} | {:.1} | {:.1} | {:.1} | {:.0}{} | {:.0} |",
            c.economy,
            c.renewable_capacity_gw,
            c.renewable_share_pct,
            c.investment_busd,
            c.carbon_price_usd_t,
            c.employment_thousands,
            if c.employment_estimated { "*" } else { "" },
            c.grid_stability_index
        );
    }
    out.push_str("\n\\* industry estimate\n\n");
}

fn ablation_section(out: &mut String, path: &Path) -> CliResult<String> {
    let table = parse_ablation_csv(&read_input(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let report = run_ablation_fixture(&table, None)?;
    out.push_str("## Ablation: component contribution\n\n");
    out.push_str("| Configuration | NPV (B) | IRR (%) | CO2 Red. (%) | Effect. | NPV change vs full (%) |\n");
    out.push_str("|---|---:|---:|---:|---:|---:|\n");
    for r in &table {
        let change = report.reduction(&r.label).map_or("".to_string(), |d| format!("{:.1}", -d.npv));
        let _ = writeln!(
            out,
            "| {} | {:.2} | {:.2} | {:.1} | {:.1} | {change} |",
            r.label, r.npv, r.irr, r.co2_reduction, r.effectiveness
        );
    }
    out.push('\n');
    Ok(enerinvest::ablation::reduction_csv(&report))
}

pub fn run(dataset_path: &Path, ablation_path: &Path, inputs: &mut RunInputs) -> CliResult<Artifacts> {
    inputs.path(dataset_path);
    inputs.path(ablation_path);
    let dataset = load_dataset(dataset_path)?;
    let opts = RegressOptions {
        dependents: Vec::new(),
        regressors: Vec::new(),
        se: Default::default(),
        country_fe: true,
        year_fe: true,
        placebo: None,
        hausman: false,
    };
    let results = fit_all(&dataset, &specs(&opts)?)?;

    let mut md = String::from("# Energy investment analysis report\n\n");
    let _ = writeln!(md, "Panel: `{}` ({} observations). Ablation table: `{}`.\n", dataset_path.display(), dataset.len(), ablation_path.display());
    let mut descriptive_csv = String::new();
    descriptive_section(&mut md, &mut descriptive_csv, &dataset)?;
    regression_section(&mut md, &results);
    let reductions = ablation_section(&mut md, ablation_path)?;
    case_study_section(&mut md);

    let labels: Vec<String> = (1..=results.len()).map(|i| format!("({i})")).collect();
    let columns: Vec<(&str, &RegressionResult)> = labels.iter().map(String::as_str).zip(&results).collect();
    let mut artifacts = Artifacts::new("report.md");
    artifacts.report = md;
    artifacts.add_csv("descriptive.csv", descriptive_csv);
    artifacts.add_csv("regression.csv", enerinvest::econometrics::regression_table_csv(&columns));
    artifacts.add_csv("reductions.csv", reductions);
    Ok(artifacts)
}
