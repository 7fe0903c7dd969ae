//! `enerinvest`: appraisal, panel regressions, scenario simulation, sensitivity
//! and ablation from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 computation undefined for the input.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use commands::ablate::{Mode, SubsetChoice};
use commands::regress::RegressOptions;
use enerinvest::econometrics::{SeKind, Term};
use error::CliResult;
use output::{Emitter, Format, RunInputs};

#[derive(Debug, Parser)]
#[command(name = "enerinvest", version, about = "Low-carbon energy investment analysis")]
struct Cli {
    /// Seed for every randomised step (placebo permutations).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Directory for report files, comma-separated twins and manifest.toml.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Leave the timestamp out of the manifest so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

fn parse_term(s: &str) -> Result<Term, String> {
    s.parse().map_err(|e: enerinvest::econometrics::EconometricsError| e.to_string())
}

fn parse_se(s: &str) -> Result<SeKind, String> {
    s.parse().map_err(|e: enerinvest::econometrics::EconometricsError| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// NPV, IRR, real-option value, carbon-adjusted cost and learning-curve projections.
    Appraise {
        /// Project configuration (TOML).
        config: PathBuf,
    },
    /// Fixed-effects panel regressions in a publication-style table.
    Regress {
        /// Panel dataset (CSV).
        dataset: PathBuf,
        /// Dependent variable, e.g. `gdp_growth` or `log(co2_emissions)`. Repeatable;
        /// defaults to the three baseline outcomes.
        #[arg(long = "dependent", value_parser = parse_term)]
        dependents: Vec<Term>,
        /// Regressor, e.g. `log(investment)`. Repeatable; defaults to the baseline set.
        #[arg(long = "regressor", value_parser = parse_term)]
        regressors: Vec<Term>,
        /// `classical` or `cluster`.
        #[arg(long, value_parser = parse_se, default_value = "classical")]
        se: SeKind,
        #[arg(long)]
        no_country_fe: bool,
        #[arg(long)]
        no_year_fe: bool,
        /// Permutation placebo test on the first regressor with this many draws.
        #[arg(long)]
        placebo: Option<usize>,
        /// One-way FE vs RE Hausman test for every model.
        #[arg(long)]
        hausman: bool,
    },
    /// Transition pathways per scenario plus a comparison when several are given.
    Simulate {
        /// Scenario configurations (TOML).
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        #[arg(long)]
        start_year: Option<i32>,
        #[arg(long)]
        end_year: Option<i32>,
    },
    /// One-at-a-time sensitivity indices in tornado order.
    Sensitivity {
        /// Model configuration (TOML).
        model: PathBuf,
        /// Perturbation table (CSV: name,baseline,low,high).
        perturbations: PathBuf,
    },
    /// Component ablation from a fixture table or a model-mode study.
    #[command(group(ArgGroup::new("source").required(true).args(["fixture", "study"])))]
    Ablate {
        /// Ablation table (CSV: label,npv_busd,irr_pct,co2_reduction_pct,effectiveness).
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Label of the full configuration row.
        #[arg(long, requires = "fixture")]
        full_label: Option<String>,
        /// Model-mode study (TOML).
        #[arg(long)]
        study: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SubsetChoice::Standard, requires = "study")]
        subsets: SubsetChoice,
    },
    /// Markdown report with descriptive statistics, regressions and ablation.
    Report {
        #[arg(long, default_value_os_t = enerinvest::fixture_dir().join("panel_fixture.csv"))]
        dataset: PathBuf,
        #[arg(long, default_value_os_t = enerinvest::fixture_dir().join("table6.csv"))]
        ablation: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Appraise { .. } => "appraise",
            Command::Regress { .. } => "regress",
            Command::Simulate { .. } => "simulate",
            Command::Sensitivity { .. } => "sensitivity",
            Command::Ablate { .. } => "ablate",
            Command::Report { .. } => "report",
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let mut inputs = RunInputs::default();
    let artifacts = match &cli.command {
        Command::Appraise { config } => commands::appraise::run(config, &mut inputs)?,
        Command::Regress { dataset, dependents, regressors, se, no_country_fe, no_year_fe, placebo, hausman } => {
            let opts = RegressOptions {
                dependents: dependents.clone(),
                regressors: regressors.clone(),
                se: *se,
                country_fe: !no_country_fe,
                year_fe: !no_year_fe,
                placebo: *placebo,
                hausman: *hausman,
            };
            commands::regress::run(dataset, &opts, cli.seed, &mut inputs)?
        }
        Command::Simulate { configs, start_year, end_year } => {
            commands::simulate::run(configs, *start_year, *end_year, &mut inputs)?
        }
        Command::Sensitivity { model, perturbations } => commands::sensitivity::run(model, perturbations, &mut inputs)?,
        Command::Ablate { fixture, full_label, study, subsets } => {
            let mode = match (fixture, study) {
                (Some(path), None) => Mode::Fixture { path, full_label: full_label.as_deref() },
                (None, Some(study)) => Mode::Model { study, subsets: *subsets },
                _ => return Err(error::CliError::input("give exactly one of --fixture or --study")),
            };
            commands::ablate::run(mode, &mut inputs)?
        }
        Command::Report { dataset, ablation } => commands::report::run(dataset, ablation, &mut inputs)?,
    };
    let emitter =
        Emitter { format: cli.format, output_dir: cli.output_dir.clone(), timestamp: !cli.no_timestamp, seed: cli.seed };
    emitter.emit(cli.command.name(), &inputs, &artifacts)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
