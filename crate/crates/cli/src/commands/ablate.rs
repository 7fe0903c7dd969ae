use std::fmt::Write as _;
use std::path::Path;

use enerinvest::ablation::{
    ablation_csv, ablation_text, all_subsets, complementarity, parse_ablation_csv, reduction_csv, reduction_text,
    run_ablation_fixture, run_ablation_model, AblationConfiguration, AblationRecord, AblationStudy, Component,
};
use enerinvest::par::Execution;

use super::read_input;
use crate::error::{CliError, CliResult};
use crate::output::{Artifacts, RunInputs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SubsetChoice {
    /// Full, none, each component removed and each component alone.
    Standard,
    /// All 32 component subsets.
    All,
}

pub enum Mode<'a> {
    Fixture { path: &'a Path, full_label: Option<&'a str> },
    Model { study: &'a Path, subsets: SubsetChoice },
}

const NO_POLICY_LABELS: [&str; 3] = ["No Policy", "none", "Baseline"];

fn synergy_section(full: &AblationRecord, singles: &[AblationRecord], baseline: Option<&AblationRecord>) -> CliResult<(String, String)> {
    let c = complementarity(full, singles, baseline)?;
    let mut text = format!(
        "\nComplementarity\n  synergy = {:.4} - best single `{}` = {:.4}\n",
        full.effectiveness, c.best_single, c.synergy
    );
    let flag = match c.superadditive {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a (no baseline row)",
    };
    let _ = writeln!(text, "  superadditive CO2 reduction: {flag}");
    let csv = format!(
        "full,best_single,synergy,superadditive\n{},{},{},{}\n",
        full.label,
        c.best_single,
        c.synergy,
        c.superadditive.map_or(String::new(), |b| b.to_string())
    );
    Ok((text, csv))
}

pub fn run(mode: Mode<'_>, inputs: &mut RunInputs) -> CliResult<Artifacts> {
    let mut artifacts = Artifacts::new("ablation.txt");
    match mode {
        Mode::Fixture { path, full_label } => {
            inputs.path(path);
            if let Some(l) = full_label {
                inputs.option("full_label", l);
            }
            let table = parse_ablation_csv(&read_input(path)?)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let report = run_ablation_fixture(&table, full_label)?;
            artifacts.report = format!("{}\n{}", ablation_text(&table), reduction_text(&report));
            artifacts.add_csv("ablation.csv", ablation_csv(&table));
            artifacts.add_csv("reductions.csv", reduction_csv(&report));

            let singles: Vec<AblationRecord> = table.iter().filter(|r| r.label.ends_with(" Only")).cloned().collect();
            if !singles.is_empty() {
                let baseline = table.iter().find(|r| NO_POLICY_LABELS.contains(&r.label.as_str()));
                let (text, csv) = synergy_section(&report.full, &singles, baseline)?;
                artifacts.report.push_str(&text);
                artifacts.add_csv("complementarity.csv", csv);
            }
        }
        Mode::Model { study: study_path, subsets } => {
            inputs.option("subsets", format!("{subsets:?}"));
            let (study, scenario_path) = AblationStudy::load(study_path)?;
            inputs.path(study_path);
            inputs.path(&scenario_path);
            let configs = match subsets {
                SubsetChoice::All => all_subsets(),
                SubsetChoice::Standard => {
                    let mut c = vec![AblationConfiguration::full()];
                    c.extend(Component::ALL.map(AblationConfiguration::without));
                    c.extend(Component::ALL.map(AblationConfiguration::only));
                    c.push(AblationConfiguration::none());
                    c
                }
            };
            let records = run_ablation_model(Execution::default(), &study, &configs)?;
            artifacts.report = format!("Model-mode ablation ({})\n{}", study_path.display(), ablation_text(&records));
            artifacts.add_csv("ablation.csv", ablation_csv(&records));

            let report = run_ablation_fixture(&records, Some(AblationConfiguration::full().label.as_str()))?;
            artifacts.report.push('\n');
            artifacts.report.push_str(&reduction_text(&report));
            artifacts.add_csv("reductions.csv", reduction_csv(&report));

            let singles: Vec<AblationRecord> = configs
                .iter()
                .zip(&records)
                .filter(|(c, _)| c.enabled.len() == 1)
                .map(|(_, r)| r.clone())
                .collect();
            let baseline = configs.iter().zip(&records).find(|(c, _)| c.enabled.is_empty()).map(|(_, r)| r);
            let (text, csv) = synergy_section(&report.full, &singles, baseline)?;
            artifacts.report.push_str(&text);
            artifacts.add_csv("complementarity.csv", csv);

            if subsets == SubsetChoice::All {
                let mut violations = Vec::new();
                for (mask, r) in records.iter().enumerate() {
                    for bit in 0..Component::ALL.len() {
                        let bigger = &records[mask | (1 << bit)];
                        if bigger.co2_reduction < r.co2_reduction {
                            violations.push(format!("{} < {}", bigger.label, r.label));
                        }
                    }
                }
                let _ = writeln!(
                    artifacts.report,
                    "\nAdding a component never lowers CO2 reduction: {}",
                    if violations.is_empty() { "holds over all 32 subsets".to_string() } else { violations.join("; ") }
                );
            }
        }
    }
    Ok(artifacts)
}
