//! Component ablation of the integrated policy-technology framework.
//!
//! Two modes that are never mixed in one report. Fixture mode takes a precomputed
//! table of configurations as given and derives percentage reductions relative
//! to the full configuration. Model mode ([`AblationStudy`]) switches components
//! off by degrading the scenario and project parameters they map to, then scores
//! every configuration with the scenario and appraisal engines.

mod model;

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::appraisal::AppraisalError;
use crate::scenario::ScenarioError;
use crate::ErrorKind;

pub use model::{
    all_subsets, effectiveness, evaluate_configuration, run_ablation_model, AblationStudy, ComponentEffect,
    ComponentEffects, EffectivenessWeights, ModelEvaluation, ProjectSpec,
};

#[derive(Debug, Error)]
pub enum AblationError {
    #[error("invalid ablation input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot normalise by a zero full-configuration {metric}")]
    Normalization { metric: &'static str },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Appraisal(#[from] AppraisalError),
}

impl AblationError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            AblationError::Invalid(_) | AblationError::Parse(_) | AblationError::Config(_) => ErrorKind::Input,
            AblationError::Domain(_) | AblationError::Normalization { .. } => ErrorKind::Computation,
            AblationError::Scenario(e) => e.kind(),
            AblationError::Appraisal(e) => e.kind(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    CarbonPricing,
    GreenFinance,
    TechnologySupport,
    GridIntegration,
    StorageInvestment,
}

impl Component {
    pub const ALL: [Component; 5] = [
        Component::CarbonPricing,
        Component::GreenFinance,
        Component::TechnologySupport,
        Component::GridIntegration,
        Component::StorageInvestment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::CarbonPricing => "carbon_pricing",
            Component::GreenFinance => "green_finance",
            Component::TechnologySupport => "technology_support",
            Component::GridIntegration => "grid_integration",
            Component::StorageInvestment => "storage_investment",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Component::CarbonPricing => "Carbon Pricing",
            Component::GreenFinance => "Green Finance",
            Component::TechnologySupport => "Technology Support",
            Component::GridIntegration => "Grid Integration",
            Component::StorageInvestment => "Storage Investment",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Component {
    type Err = AblationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Component::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| AblationError::Invalid(format!("unknown component `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AblationConfiguration {
    pub label: String,
    pub enabled: BTreeSet<Component>,
}

impl AblationConfiguration {
    pub fn new(label: impl Into<String>, enabled: impl IntoIterator<Item = Component>) -> Self {
        AblationConfiguration { label: label.into(), enabled: enabled.into_iter().collect() }
    }

    pub fn full() -> Self {
        Self::new("Full Framework", Component::ALL)
    }

    pub fn none() -> Self {
        Self::new("No Policy", [])
    }

    pub fn without(component: Component) -> Self {
        Self::new(
            format!("w/o {}", component.label()),
            Component::ALL.into_iter().filter(|&c| c != component),
        )
    }

    pub fn only(component: Component) -> Self {
        Self::new(format!("{} Only", component.label()), [component])
    }

    pub fn is_enabled(&self, component: Component) -> bool {
        self.enabled.contains(&component)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRecord {
    pub label: String,
    /// Billion USD.
    pub npv: f64,
    /// Percent.
    pub irr: f64,
    /// Percent.
    pub co2_reduction: f64,
    /// Score in [0, 100].
    pub effectiveness: f64,
}

impl AblationRecord {
    fn metrics(&self) -> [f64; 4] {
        [self.npv, self.irr, self.co2_reduction, self.effectiveness]
    }

    pub fn validate(&self) -> Result<(), AblationError> {
        if self.metrics().iter().any(|v| !v.is_finite()) {
            return Err(AblationError::Invalid(format!("`{}`: metrics must be finite", self.label)));
        }
        if !(0.0..=100.0).contains(&self.effectiveness) {
            return Err(AblationError::Invalid(format!(
                "`{}`: effectiveness {} outside [0, 100]",
                self.label, self.effectiveness
            )));
        }
        if !(0.0..=100.0).contains(&self.co2_reduction) {
            return Err(AblationError::Invalid(format!(
                "`{}`: co2_reduction {} outside [0, 100]",
                self.label, self.co2_reduction
            )));
        }
        Ok(())
    }
}

pub const ABLATION_HEADER: &str = "label,npv_busd,irr_pct,co2_reduction_pct,effectiveness";

fn check_unique(records: &[AblationRecord]) -> Result<(), AblationError> {
    let mut seen = BTreeSet::new();
    for r in records {
        if !seen.insert(r.label.as_str()) {
            return Err(AblationError::Invalid(format!("duplicate configuration label `{}`", r.label)));
        }
    }
    Ok(())
}

pub fn parse_ablation_csv(text: &str) -> Result<Vec<AblationRecord>, AblationError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| AblationError::Parse(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.join(",") != ABLATION_HEADER {
        return Err(AblationError::Parse(format!("expected header `{ABLATION_HEADER}`, found `{}`", header.join(","))));
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| AblationError::Parse(e.to_string()))?;
        let num = |col: usize| -> Result<f64, AblationError> {
            let raw = row.get(col).unwrap_or("");
            raw.parse().map_err(|_| {
                AblationError::Parse(format!("row {}, column `{}`: cannot parse `{raw}`", i + 1, header[col]))
            })
        };
        let record = AblationRecord {
            label: row.get(0).unwrap_or("").to_string(),
            npv: num(1)?,
            irr: num(2)?,
            co2_reduction: num(3)?,
            effectiveness: num(4)?,
        };
        if record.label.is_empty() {
            return Err(AblationError::Parse(format!("row {}: empty label", i + 1)));
        }
        record.validate()?;
        records.push(record);
    }
    check_unique(&records)?;
    Ok(records)
}

pub fn ablation_csv(records: &[AblationRecord]) -> String {
    let mut out = format!("{ABLATION_HEADER}\n");
    for r in records {
        let _ = writeln!(out, "{},{},{},{},{}", r.label, r.npv, r.irr, r.co2_reduction, r.effectiveness);
    }
    out
}

/// Aligned text, one row per configuration.
pub fn ablation_text(records: &[AblationRecord]) -> String {
    let width = records.iter().map(|r| r.label.len()).max().unwrap_or(0).max("Configuration".len());
    let mut out =
        format!("{:<width$}  {:>9}  {:>8}  {:>13}  {:>8}\n", "Configuration", "NPV (B)", "IRR (%)", "CO2 Red. (%)", "Effect.");
    for r in records {
        let _ = writeln!(
            out,
            "{:<width$}  {:>9.2}  {:>8.2}  {:>13.1}  {:>8.1}",
            r.label, r.npv, r.irr, r.co2_reduction, r.effectiveness
        );
    }
    out
}

/// Labels recognised as the full configuration when none is given explicitly.
pub const FULL_LABELS: [&str; 3] = ["Full Framework", "Integrated Policy Mix", "full"];

/// Percentage reductions of one configuration relative to the full one.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub label: String,
    pub npv: f64,
    pub irr: f64,
    pub co2_reduction: f64,
    pub effectiveness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationReport {
    pub full: AblationRecord,
    /// Non-full rows in table order.
    pub reductions: Vec<Reduction>,
    /// Labels by NPV reduction, largest first, ties by label.
    pub ranking: Vec<(String, f64)>,
}

impl AblationReport {
    pub fn reduction(&self, label: &str) -> Option<&Reduction> {
        self.reductions.iter().find(|r| r.label == label)
    }
}

fn percent_reduction(full: f64, row: f64, metric: &'static str) -> Result<f64, AblationError> {
    if full == 0.0 {
        return Err(AblationError::Normalization { metric });
    }
    Ok((full - row) / full * 100.0)
}

/// Reductions relative to the row labelled `full_label`, or to the first row
/// carrying one of [`FULL_LABELS`].
pub fn run_ablation_fixture(
    table: &[AblationRecord],
    full_label: Option<&str>,
) -> Result<AblationReport, AblationError> {
    check_unique(table)?;
    let full = match full_label {
        Some(label) => table.iter().find(|r| r.label == label),
        None => table.iter().find(|r| FULL_LABELS.contains(&r.label.as_str())),
    }
    .ok_or_else(|| {
        AblationError::Domain(match full_label {
            Some(label) => format!("no row labelled `{label}`"),
            None => format!("no full-configuration row (expected one of {FULL_LABELS:?})"),
        })
    })?;
    let mut reductions = Vec::new();
    for r in table.iter().filter(|r| r.label != full.label) {
        reductions.push(Reduction {
            label: r.label.clone(),
            npv: percent_reduction(full.npv, r.npv, "npv")?,
            irr: percent_reduction(full.irr, r.irr, "irr")?,
            co2_reduction: percent_reduction(full.co2_reduction, r.co2_reduction, "co2_reduction")?,
            effectiveness: percent_reduction(full.effectiveness, r.effectiveness, "effectiveness")?,
        });
    }
    let mut ranking: Vec<(String, f64)> = reductions.iter().map(|r| (r.label.clone(), r.npv)).collect();
    ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(AblationReport { full: full.clone(), reductions, ranking })
}

pub const REDUCTION_HEADER: &str = "label,npv_reduction_pct,irr_reduction_pct,co2_reduction_reduction_pct,effectiveness_reduction_pct";

pub fn reduction_csv(report: &AblationReport) -> String {
    let mut out = format!("{REDUCTION_HEADER}\n");
    for r in &report.reductions {
        let _ = writeln!(out, "{},{},{},{},{}", r.label, r.npv, r.irr, r.co2_reduction, r.effectiveness);
    }
    out
}

pub fn reduction_text(report: &AblationReport) -> String {
    let width = report.reductions.iter().map(|r| r.label.len()).max().unwrap_or(0).max("Configuration".len());
    let mut out = format!(
        "Reductions relative to `{}` (%)\n{:<width$}  {:>8}  {:>8}  {:>9}  {:>8}\n",
        report.full.label, "Configuration", "NPV", "IRR", "CO2 Red.", "Effect."
    );
    for r in &report.reductions {
        let _ = writeln!(
            out,
            "{:<width$}  {:>8.1}  {:>8.1}  {:>9.1}  {:>8.1}",
            r.label, r.npv, r.irr, r.co2_reduction, r.effectiveness
        );
    }
    if !report.ranking.is_empty() {
        out.push_str("\nRanking by NPV reduction\n");
        for (i, (label, v)) in report.ranking.iter().enumerate() {
            let _ = writeln!(out, "{:>2}. {label} ({v:.1}%)", i + 1);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Complementarity {
    /// Full effectiveness minus the best single-component effectiveness.
    pub synergy: f64,
    pub best_single: String,
    /// Whether the full CO2 reduction above the baseline exceeds the sum of the
    /// singles' reductions above it. Only defined when a baseline is supplied.
    pub superadditive: Option<bool>,
}

pub fn complementarity(
    full: &AblationRecord,
    singles: &[AblationRecord],
    baseline: Option<&AblationRecord>,
) -> Result<Complementarity, AblationError> {
    let best = singles
        .iter()
        .max_by(|a, b| a.effectiveness.total_cmp(&b.effectiveness).then_with(|| b.label.cmp(&a.label)))
        .ok_or_else(|| AblationError::Domain("complementarity needs at least one single-component record".into()))?;
    let superadditive = baseline.map(|base| {
        let gain: f64 = singles.iter().map(|s| s.co2_reduction - base.co2_reduction).sum();
        full.co2_reduction - base.co2_reduction > gain
    });
    Ok(Complementarity { synergy: full.effectiveness - best.effectiveness, best_single: best.label.clone(), superadditive })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(label: &str, npv: f64, eff: f64) -> AblationRecord {
        AblationRecord { label: label.into(), npv, irr: 10.0, co2_reduction: 20.0, effectiveness: eff }
    }

    #[test]
    fn reductions_against_full() {
        let table = vec![rec("Full Framework", 8.52, 92.5), rec("w/o Carbon Pricing", 5.85, 65.8), rec("same", 8.52, 92.5)];
        let report = run_ablation_fixture(&table, None).unwrap();
        assert!((report.reduction("w/o Carbon Pricing").unwrap().npv - 31.338).abs() < 1e-3);
        let same = report.reduction("same").unwrap();
        assert_eq!((same.npv, same.irr, same.co2_reduction, same.effectiveness), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(report.ranking[0].0, "w/o Carbon Pricing");
    }

    #[test]
    fn missing_full_and_zero_metric() {
        let err = run_ablation_fixture(&[rec("a", 1.0, 1.0)], None).unwrap_err();
        assert!(matches!(err, AblationError::Domain(_)));
        let err = run_ablation_fixture(&[rec("full", 0.0, 1.0), rec("b", 1.0, 1.0)], None).unwrap_err();
        assert!(matches!(err, AblationError::Normalization { metric: "npv" }));
        assert_eq!(err.kind(), ErrorKind::Computation);
        let report = run_ablation_fixture(&[rec("full", 0.0, 1.0)], None).unwrap();
        assert!(report.reductions.is_empty());
    }

    #[test]
    fn synergy_cases() {
        let full = rec("full", 8.52, 92.5);
        let c = complementarity(&full, &[rec("cp", 3.52, 45.2)], None).unwrap();
        assert!((c.synergy - 47.3).abs() < 1e-9);
        assert_eq!(complementarity(&full, &[rec("cp", 1.0, 45.2), full.clone()], None).unwrap().synergy, 0.0);
        let c = complementarity(&rec("f", 1.0, 20.0), &[rec("a", 1.0, 10.0), rec("b", 1.0, 20.0)], None).unwrap();
        assert_eq!(c.synergy, 0.0);
        assert!(complementarity(&full, &[], None).is_err());
    }

    #[test]
    fn superadditivity_uses_baseline() {
        let mut full = rec("full", 1.0, 90.0);
        full.co2_reduction = 40.0;
        let mut a = rec("a", 1.0, 30.0);
        a.co2_reduction = 15.0;
        let mut b = rec("b", 1.0, 30.0);
        b.co2_reduction = 15.0;
        let mut base = rec("none", 1.0, 0.0);
        base.co2_reduction = 5.0;
        let c = complementarity(&full, &[a, b], Some(&base)).unwrap();
        assert_eq!(c.superadditive, Some(true));
    }

    #[test]
    fn csv_round_trip_and_validation() {
        let text = "label,npv_busd,irr_pct,co2_reduction_pct,effectiveness\nFull Framework,8.52,15.23,42.5,92.5\n";
        let records = parse_ablation_csv(text).unwrap();
        assert_eq!(ablation_csv(&records), text);
        assert!(parse_ablation_csv("label,npv_busd,irr_pct,co2_reduction_pct,effectiveness\nx,1,1,1,120\n").is_err());
        assert!(parse_ablation_csv("label,npv\nx,1\n").is_err());
        let dup = "label,npv_busd,irr_pct,co2_reduction_pct,effectiveness\nx,1,1,1,1\nx,2,2,2,2\n";
        assert!(parse_ablation_csv(dup).is_err());
    }

    #[test]
    fn component_names_round_trip() {
        for c in Component::ALL {
            assert_eq!(c.name().parse::<Component>().unwrap(), c);
        }
        assert_eq!(AblationConfiguration::without(Component::CarbonPricing).label, "w/o Carbon Pricing");
    }
}
