use std::path::Path;

use enerinvest::par::Execution;
use enerinvest::sensitivity::{parse_perturbations, tornado_csv, tornado_text, SensitivityModel};

use super::read_input;
use crate::error::{CliError, CliResult};
use crate::output::{Artifacts, RunInputs};

pub fn run(model_path: &Path, perturbation_path: &Path, inputs: &mut RunInputs) -> CliResult<Artifacts> {
    inputs.path(model_path);
    inputs.path(perturbation_path);
    let model = SensitivityModel::from_toml_str(&read_input(model_path)?)
        .map_err(|e| CliError::input(format!("{}: {e}", model_path.display())))?;
    let perturbations = parse_perturbations(&read_input(perturbation_path)?)
        .map_err(|e| CliError::input(format!("{}: {e}", perturbation_path.display())))?;
    let records = model.tornado(Execution::default(), &perturbations)?;

    let mut artifacts = Artifacts::new("tornado.txt");
    artifacts.report = tornado_text(&records);
    artifacts.add_csv("tornado.csv", tornado_csv(&records));
    Ok(artifacts)
}
