use std::fmt::Write as _;
use std::path::Path;

use enerinvest::data::{load_panel, ColumnSchema, PanelDataset};
use enerinvest::econometrics::{
    fit_fe, hausman, placebo_test, regression_table_csv, regression_table_text, RegressionResult, RegressionSpec,
    SeKind, Term,
};

use crate::error::{CliError, CliResult};
use crate::output::{Artifacts, RunInputs};

pub struct RegressOptions {
    pub dependents: Vec<Term>,
    pub regressors: Vec<Term>,
    pub se: SeKind,
    pub country_fe: bool,
    pub year_fe: bool,
    pub placebo: Option<usize>,
    pub hausman: bool,
}

pub fn load_dataset(path: &Path) -> CliResult<PanelDataset> {
    let file = std::fs::File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(load_panel(file, &ColumnSchema::default())?)
}

pub fn specs(opts: &RegressOptions) -> CliResult<Vec<RegressionSpec>> {
    let dependents =
        if opts.dependents.is_empty() { RegressionSpec::baseline_outcomes().to_vec() } else { opts.dependents.clone() };
    dependents
        .into_iter()
        .map(|d| {
            let spec = if opts.regressors.is_empty() {
                RegressionSpec::baseline(d)
            } else {
                RegressionSpec::new(d, opts.regressors.clone())?
            };
            Ok(spec.with_fixed_effects(opts.country_fe, opts.year_fe).with_se(opts.se))
        })
        .collect()
}

pub fn fit_all(dataset: &PanelDataset, specs: &[RegressionSpec]) -> CliResult<Vec<RegressionResult>> {
    specs.iter().map(|s| fit_fe(dataset, s).map_err(CliError::from)).collect()
}

pub fn run(path: &Path, opts: &RegressOptions, seed: u64, inputs: &mut RunInputs) -> CliResult<Artifacts> {
    inputs.path(path);
    let specs = specs(opts)?;
    for (i, s) in specs.iter().enumerate() {
        let regressors: Vec<String> = s.regressors.iter().map(|t| t.to_string()).collect();
        inputs.option(&format!("model{}", i + 1), format!("{} ~ {}", s.dependent, regressors.join(" + ")));
    }
    inputs.option("se", format!("{:?}", opts.se));
    inputs.option("fixed_effects", format!("country={},year={}", opts.country_fe, opts.year_fe));
    if let Some(n) = opts.placebo {
        inputs.option("placebo", n);
    }
    inputs.option("hausman", opts.hausman);

    let dataset = load_dataset(path)?;
    let results = fit_all(&dataset, &specs)?;
    let labels: Vec<String> = (1..=results.len()).map(|i| format!("({i})")).collect();
    let columns: Vec<(&str, &RegressionResult)> = labels.iter().map(String::as_str).zip(&results).collect();

    let mut artifacts = Artifacts::new("regression.txt");
    artifacts.report = regression_table_text(&columns);
    artifacts.add_csv("regression.csv", regression_table_csv(&columns));

    if opts.hausman {
        let mut text = String::from("\nHausman test, one-way country effects (FE vs RE)\n");
        let mut csv = String::from("model,dependent,statistic,degrees_freedom,p_value,reliable\n");
        for (label, spec) in labels.iter().zip(&specs) {
            let (_, _, h) = hausman(&dataset, spec)?;
            let _ = writeln!(
                text,
                "  {label} {:<20} chi2({}) = {:.4}, p = {:.4}{}",
                spec.dependent.to_string(),
                h.degrees_freedom,
                h.statistic,
                h.p_value,
                if h.reliable { "" } else { "  [variance difference not positive definite]" }
            );
            let _ = writeln!(csv, "{label},{},{},{},{},{}", spec.dependent, h.statistic, h.degrees_freedom, h.p_value, h.reliable);
        }
        artifacts.report.push_str(&text);
        artifacts.add_csv("hausman.csv", csv);
    }

    if let Some(n) = opts.placebo {
        let mut text = format!("\nPlacebo permutation test ({n} permutations, seed {seed})\n");
        let mut summary = String::from("model,dependent,regressor,observed,p_value\n");
        let mut draws = String::from("model,permutation,coefficient\n");
        for (label, spec) in labels.iter().zip(&specs) {
            let p = placebo_test(&dataset, spec, n, seed)?;
            let _ = writeln!(
                text,
                "  {label} {:<20} {} observed {:.4}, permutation p = {:.4}",
                spec.dependent.to_string(),
                p.regressor,
                p.observed,
                p.p_value
            );
            let _ = writeln!(summary, "{label},{},{},{},{}", spec.dependent, p.regressor, p.observed, p.p_value);
            for (i, b) in p.permuted.iter().enumerate() {
                let _ = writeln!(draws, "{label},{i},{b}");
            }
        }
        artifacts.report.push_str(&text);
        artifacts.add_csv("placebo.csv", summary);
        artifacts.add_csv("placebo_draws.csv", draws);
    }
    Ok(artifacts)
}
