//! One-at-a-time sensitivity analysis.
//!
//! The sensitivity index of a parameter is the symmetric two-point elasticity
//! `|(m(high) − m(low)) / m(baseline)| / ((high − low) / baseline)`. Perturbation
//! ranges are always explicit inputs.

mod model;

use std::fmt::Write as _;

use thiserror::Error;

use crate::par::{self, Execution};
use crate::ErrorKind;

pub use model::{NpvProjectModel, SensitivityModel, NPV_PROJECT_PARAMETERS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SensitivityError {
    #[error("invalid perturbation `{name}`: {message}")]
    Invalid { name: String, message: String },
    #[error("model output is zero at the baseline of `{parameter}`; the index is undefined")]
    Normalization { parameter: String },
    #[error("model output is not finite for `{parameter}` = {value}")]
    NonFinite { parameter: String, value: f64 },
    #[error("unknown parameter `{0}` for this model")]
    UnknownParameter(String),
    #[error("no perturbations given")]
    Empty,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl SensitivityError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            SensitivityError::Normalization { .. } | SensitivityError::NonFinite { .. } => ErrorKind::Computation,
            _ => ErrorKind::Input,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPerturbation {
    name: String,
    baseline: f64,
    low: f64,
    high: f64,
}

impl ParameterPerturbation {
    pub fn new(name: impl Into<String>, baseline: f64, low: f64, high: f64) -> Result<Self, SensitivityError> {
        let name = name.into();
        let invalid = |message: String| SensitivityError::Invalid { name: name.clone(), message };
        if ![baseline, low, high].iter().all(|v| v.is_finite()) {
            return Err(invalid("values must be finite".into()));
        }
        if !(low < baseline && baseline < high) {
            return Err(invalid(format!("need low < baseline < high, got {low}, {baseline}, {high}")));
        }
        if baseline == 0.0 {
            return Err(invalid("baseline must be nonzero".into()));
        }
        Ok(ParameterPerturbation { name, baseline, low, high })
    }

    /// Perturbation of ±`fraction` around `baseline`.
    pub fn symmetric(name: impl Into<String>, baseline: f64, fraction: f64) -> Result<Self, SensitivityError> {
        let delta = (baseline * fraction).abs();
        Self::new(name, baseline, baseline - delta, baseline + delta)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityRecord {
    pub parameter: String,
    pub index: f64,
    pub output_low: f64,
    pub output_high: f64,
}

pub fn sensitivity_index(
    model: impl Fn(f64) -> f64,
    perturbation: &ParameterPerturbation,
) -> Result<SensitivityRecord, SensitivityError> {
    let eval = |value: f64| {
        let out = model(value);
        if out.is_finite() {
            Ok(out)
        } else {
            Err(SensitivityError::NonFinite { parameter: perturbation.name.clone(), value })
        }
    };
    let base = eval(perturbation.baseline)?;
    if base == 0.0 {
        return Err(SensitivityError::Normalization { parameter: perturbation.name.clone() });
    }
    let low = eval(perturbation.low)?;
    let high = eval(perturbation.high)?;
    let output_change = (high - low) / base;
    let input_change = (perturbation.high - perturbation.low) / perturbation.baseline;
    Ok(SensitivityRecord {
        parameter: perturbation.name.clone(),
        index: (output_change / input_change).abs(),
        output_low: low,
        output_high: high,
    })
}

/// Indices for every perturbation, most influential first. Ties are ordered by
/// parameter name. `model(name, value)` evaluates the output with only `name`
/// moved to `value`.
pub fn tornado(
    model: impl Fn(&str, f64) -> f64 + Sync + Send,
    perturbations: &[ParameterPerturbation],
) -> Result<Vec<SensitivityRecord>, SensitivityError> {
    tornado_with(Execution::default(), model, perturbations)
}

pub fn tornado_with(
    exec: Execution,
    model: impl Fn(&str, f64) -> f64 + Sync + Send,
    perturbations: &[ParameterPerturbation],
) -> Result<Vec<SensitivityRecord>, SensitivityError> {
    if perturbations.is_empty() {
        return Err(SensitivityError::Empty);
    }
    let mut records = par::map(exec, perturbations, |p| sensitivity_index(|v| model(p.name(), v), p))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by(|a, b| b.index.total_cmp(&a.index).then_with(|| a.parameter.cmp(&b.parameter)));
    Ok(records)
}

pub const PERTURBATION_HEADER: &str = "name,baseline,low,high";
pub const TORNADO_HEADER: &str = "parameter,index,output_low,output_high";

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn expect_header(reader: &mut csv::Reader<&[u8]>, expected: &str) -> Result<(), SensitivityError> {
    let header = reader.headers().map_err(|e| SensitivityError::Parse(e.to_string()))?;
    let found: Vec<&str> = header.iter().collect();
    if found.join(",") != expected {
        return Err(SensitivityError::Parse(format!("expected header `{expected}`, found `{}`", found.join(","))));
    }
    Ok(())
}

fn cell(record: &csv::StringRecord, row: usize, col: usize, name: &str) -> Result<f64, SensitivityError> {
    let raw = record.get(col).unwrap_or("");
    raw.parse()
        .map_err(|_| SensitivityError::Parse(format!("row {row}, column `{name}`: cannot parse `{raw}` as a number")))
}

pub fn parse_perturbations(text: &str) -> Result<Vec<ParameterPerturbation>, SensitivityError> {
    let mut reader = csv_reader(text);
    expect_header(&mut reader, PERTURBATION_HEADER)?;
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| SensitivityError::Parse(e.to_string()))?;
        let row = i + 1;
        let name = record.get(0).unwrap_or("").to_string();
        if name.is_empty() {
            return Err(SensitivityError::Parse(format!("row {row}: empty parameter name")));
        }
        if out.iter().any(|p: &ParameterPerturbation| p.name == name) {
            return Err(SensitivityError::Parse(format!("row {row}: duplicate parameter `{name}`")));
        }
        let baseline = cell(&record, row, 1, "baseline")?;
        let low = cell(&record, row, 2, "low")?;
        let high = cell(&record, row, 3, "high")?;
        out.push(ParameterPerturbation::new(name, baseline, low, high)?);
    }
    Ok(out)
}

pub fn tornado_csv(records: &[SensitivityRecord]) -> String {
    let mut out = format!("{TORNADO_HEADER}\n");
    for r in records {
        let _ = writeln!(out, "{},{},{},{}", r.parameter, r.index, r.output_low, r.output_high);
    }
    out
}

pub fn parse_tornado_csv(text: &str) -> Result<Vec<SensitivityRecord>, SensitivityError> {
    let mut reader = csv_reader(text);
    expect_header(&mut reader, TORNADO_HEADER)?;
    reader
        .records()
        .enumerate()
        .map(|(i, record)| {
            let record = record.map_err(|e| SensitivityError::Parse(e.to_string()))?;
            Ok(SensitivityRecord {
                parameter: record.get(0).unwrap_or("").to_string(),
                index: cell(&record, i + 1, 1, "index")?,
                output_low: cell(&record, i + 1, 2, "output_low")?,
                output_high: cell(&record, i + 1, 3, "output_high")?,
            })
        })
        .collect()
}

pub fn tornado_text(records: &[SensitivityRecord]) -> String {
    let width = records.iter().map(|r| r.parameter.len()).max().unwrap_or(0).max("Parameter".len());
    let mut out = format!("{:<width$}  {:>10}  {:>14}  {:>14}\n", "Parameter", "Index", "Output (low)", "Output (high)");
    for r in records {
        let _ = writeln!(
            out,
            "{:<width$}  {:>10.4}  {:>14.4}  {:>14.4}",
            r.parameter, r.index, r.output_low, r.output_high
        );
    }
    out
}
