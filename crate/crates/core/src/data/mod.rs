//! Country-year panel data: schema, CSV ingestion, serialisation and descriptive
//! statistics.

mod case_studies;
pub mod synth;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::ErrorKind;

pub use case_studies::{case_studies, CaseStudy};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("schema error: missing column `{0}`")]
    MissingColumn(String),
    #[error("parse error at row {row}, column `{column}`: cannot read {value:?} as a number")]
    Parse { row: usize, column: String, value: String },
    #[error("missing value at row {row}, column `{column}`")]
    MissingValue { row: usize, column: String },
    #[error("integrity error: duplicate observation for ({country}, {year})")]
    Duplicate { country: String, year: i32 },
    #[error("domain error: {field} = {value} for ({country}, {year}) {requirement}")]
    Domain { country: String, year: i32, field: &'static str, value: f64, requirement: &'static str },
    #[error("domain error: dataset is empty")]
    Empty,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl DataError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            DataError::Empty => ErrorKind::Computation,
            _ => ErrorKind::Input,
        }
    }
}

/// Numeric variables of the panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    /// Renewable energy investment, billion USD.
    Investment,
    /// Annual GDP growth, percent.
    GdpGrowth,
    /// CO2 emissions, million tonnes per year.
    Co2Emissions,
    /// Effective carbon price, USD per tonne.
    CarbonPrice,
    /// Composite policy support score, 0–100.
    PolicyIndex,
    /// Technology innovation index, 0–100.
    TechIndex,
    /// Renewable share of the energy mix, percent.
    RenewableShare,
    /// Energy consumption per unit GDP, MJ/USD.
    EnergyIntensity,
}

impl Variable {
    pub const ALL: [Variable; 8] = [
        Variable::Investment,
        Variable::GdpGrowth,
        Variable::Co2Emissions,
        Variable::CarbonPrice,
        Variable::PolicyIndex,
        Variable::TechIndex,
        Variable::RenewableShare,
        Variable::EnergyIntensity,
    ];

    /// Short identifier used in specifications and reports.
    pub fn name(self) -> &'static str {
        match self {
            Variable::Investment => "investment",
            Variable::GdpGrowth => "gdp_growth",
            Variable::Co2Emissions => "co2_emissions",
            Variable::CarbonPrice => "carbon_price",
            Variable::PolicyIndex => "policy_index",
            Variable::TechIndex => "tech_index",
            Variable::RenewableShare => "renewable_share",
            Variable::EnergyIntensity => "energy_intensity",
        }
    }

    /// Canonical CSV column name.
    pub fn column(self) -> &'static str {
        match self {
            Variable::Investment => "investment_busd",
            Variable::GdpGrowth => "gdp_growth_pct",
            Variable::Co2Emissions => "co2_mt",
            Variable::CarbonPrice => "carbon_price_usd_t",
            Variable::PolicyIndex => "policy_index",
            Variable::TechIndex => "tech_index",
            Variable::RenewableShare => "renewable_share_pct",
            Variable::EnergyIntensity => "energy_intensity_mj_usd",
        }
    }

    /// Human label used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Variable::Investment => "Renewable Investment (B USD)",
            Variable::GdpGrowth => "GDP Growth (%)",
            Variable::Co2Emissions => "CO2 Emissions (Mt)",
            Variable::CarbonPrice => "Carbon Price (USD/t)",
            Variable::PolicyIndex => "Policy Support Index",
            Variable::TechIndex => "Technology Index",
            Variable::RenewableShare => "Renewable Share (%)",
            Variable::EnergyIntensity => "Energy Intensity",
        }
    }

    pub fn value(self, obs: &PanelObservation) -> f64 {
        match self {
            Variable::Investment => obs.investment,
            Variable::GdpGrowth => obs.gdp_growth,
            Variable::Co2Emissions => obs.co2_emissions,
            Variable::CarbonPrice => obs.carbon_price,
            Variable::PolicyIndex => obs.policy_index,
            Variable::TechIndex => obs.tech_index,
            Variable::RenewableShare => obs.renewable_share,
            Variable::EnergyIntensity => obs.energy_intensity,
        }
    }

    fn slot(self, obs: &mut PanelObservation) -> &mut f64 {
        match self {
            Variable::Investment => &mut obs.investment,
            Variable::GdpGrowth => &mut obs.gdp_growth,
            Variable::Co2Emissions => &mut obs.co2_emissions,
            Variable::CarbonPrice => &mut obs.carbon_price,
            Variable::PolicyIndex => &mut obs.policy_index,
            Variable::TechIndex => &mut obs.tech_index,
            Variable::RenewableShare => &mut obs.renewable_share,
            Variable::EnergyIntensity => &mut obs.energy_intensity,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variable {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Variable::ALL
            .into_iter()
            .find(|v| v.name() == s || v.column() == s)
            .or(match s {
                "co2" | "emissions" => Some(Variable::Co2Emissions),
                _ => None,
            })
            .ok_or_else(|| DataError::UnknownVariable(s.to_string()))
    }
}

/// One country-year row.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelObservation {
    pub country: String,
    pub year: i32,
    pub investment: f64,
    pub gdp_growth: f64,
    pub co2_emissions: f64,
    pub carbon_price: f64,
    pub policy_index: f64,
    pub tech_index: f64,
    pub renewable_share: f64,
    pub energy_intensity: f64,
}

impl PanelObservation {
    /// Checks the per-row domain constraints.
    pub fn validate(&self) -> Result<(), DataError> {
        let fail = |field, value, requirement| DataError::Domain {
            country: self.country.clone(),
            year: self.year,
            field,
            value,
            requirement,
        };
        let finite = Variable::ALL.iter().find(|v| !v.value(self).is_finite());
        if let Some(v) = finite {
            return Err(fail(v.name(), v.value(self), "must be finite"));
        }
        if self.investment <= 0.0 {
            return Err(fail("investment", self.investment, "must be > 0 (log regressor undefined)"));
        }
        if self.co2_emissions <= 0.0 {
            return Err(fail("co2_emissions", self.co2_emissions, "must be > 0"));
        }
        if self.energy_intensity <= 0.0 {
            return Err(fail("energy_intensity", self.energy_intensity, "must be > 0"));
        }
        if self.carbon_price < 0.0 {
            return Err(fail("carbon_price", self.carbon_price, "must be >= 0"));
        }
        for (field, v) in [
            ("policy_index", self.policy_index),
            ("tech_index", self.tech_index),
            ("renewable_share", self.renewable_share),
        ] {
            if !(0.0..=100.0).contains(&v) {
                return Err(fail(field, v, "must lie in [0, 100]"));
            }
        }
        Ok(())
    }
}

/// Maps each observation field to a CSV column name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSchema {
    pub country: String,
    pub year: String,
    pub variables: BTreeMap<Variable, String>,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        ColumnSchema {
            country: "country".into(),
            year: "year".into(),
            variables: Variable::ALL.iter().map(|v| (*v, v.column().to_string())).collect(),
        }
    }
}

/// A validated panel, sorted by (country, year). Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    observations: Vec<PanelObservation>,
    country_index: BTreeMap<String, usize>,
    year_index: BTreeMap<i32, usize>,
    balanced: bool,
}

impl PanelDataset {
    /// Validates and sorts `observations`.
    pub fn new(mut observations: Vec<PanelObservation>) -> Result<Self, DataError> {
        for obs in &observations {
            obs.validate()?;
        }
        observations.sort_by(|a, b| a.country.cmp(&b.country).then(a.year.cmp(&b.year)));
        for pair in observations.windows(2) {
            if pair[0].country == pair[1].country && pair[0].year == pair[1].year {
                return Err(DataError::Duplicate { country: pair[0].country.clone(), year: pair[0].year });
            }
        }
        let countries: BTreeSet<&str> = observations.iter().map(|o| o.country.as_str()).collect();
        let years: BTreeSet<i32> = observations.iter().map(|o| o.year).collect();
        let country_index = countries.iter().enumerate().map(|(i, c)| (c.to_string(), i)).collect();
        let year_index: BTreeMap<i32, usize> = years.iter().enumerate().map(|(i, y)| (*y, i)).collect();
        let balanced = observations.len() == countries.len() * years.len();
        Ok(PanelDataset { observations, country_index, year_index, balanced })
    }

    pub fn observations(&self) -> &[PanelObservation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn country_index(&self) -> &BTreeMap<String, usize> {
        &self.country_index
    }

    pub fn year_index(&self) -> &BTreeMap<i32, usize> {
        &self.year_index
    }

    pub fn n_countries(&self) -> usize {
        self.country_index.len()
    }

    pub fn n_years(&self) -> usize {
        self.year_index.len()
    }

    /// True iff every country is observed in every year present in the dataset.
    pub fn is_balanced(&self) -> bool {
        self.balanced
    }

    /// Contiguous country index per row.
    pub fn country_ids(&self) -> Vec<usize> {
        self.observations.iter().map(|o| self.country_index[&o.country]).collect()
    }

    /// Contiguous year index per row.
    pub fn year_ids(&self) -> Vec<usize> {
        self.observations.iter().map(|o| self.year_index[&o.year]).collect()
    }

    pub fn column(&self, var: Variable) -> Vec<f64> {
        self.observations.iter().map(|o| var.value(o)).collect()
    }

    /// Returns a copy with `var` replaced row by row. Values must respect the
    /// variable's domain.
    pub fn with_column(&self, var: Variable, values: &[f64]) -> Result<Self, DataError> {
        assert_eq!(values.len(), self.len(), "column length must match the dataset");
        let mut obs = self.observations.clone();
        for (o, v) in obs.iter_mut().zip(values) {
            *var.slot(o) = *v;
        }
        PanelDataset::new(obs)
    }
}

/// Reads a comma-separated panel with a header row.
pub fn load_panel<R: Read>(source: R, schema: &ColumnSchema) -> Result<PanelDataset, DataError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let headers = reader.headers()?.clone();
    let position = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| DataError::MissingColumn(name.to_string()))
    };
    let country_col = position(&schema.country)?;
    let year_col = position(&schema.year)?;
    let var_cols = Variable::ALL
        .iter()
        .map(|v| {
            let name = schema.variables.get(v).map(String::as_str).unwrap_or(v.column());
            Ok((*v, name.to_string(), position(name)?))
        })
        .collect::<Result<Vec<_>, DataError>>()?;

    let mut observations = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        // Row numbers are 1-based data rows; the header is row 0.
        let row = i + 1;
        let cell = |col: usize, name: &str| -> Result<&str, DataError> {
            match record.get(col) {
                Some(v) if !v.is_empty() => Ok(v),
                _ => Err(DataError::MissingValue { row, column: name.to_string() }),
            }
        };
        let country = cell(country_col, &schema.country)?.to_string();
        let year_raw = cell(year_col, &schema.year)?;
        let year = year_raw.parse::<i32>().map_err(|_| DataError::Parse {
            row,
            column: schema.year.clone(),
            value: year_raw.to_string(),
        })?;
        let mut obs = PanelObservation {
            country,
            year,
            investment: 0.0,
            gdp_growth: 0.0,
            co2_emissions: 0.0,
            carbon_price: 0.0,
            policy_index: 0.0,
            tech_index: 0.0,
            renewable_share: 0.0,
            energy_intensity: 0.0,
        };
        for (var, name, col) in &var_cols {
            let raw = cell(*col, name)?;
            let value = raw.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                DataError::Parse { row, column: name.clone(), value: raw.to_string() }
            })?;
            *var.slot(&mut obs) = value;
        }
        observations.push(obs);
    }
    PanelDataset::new(observations)
}

/// Writes the dataset with canonical column names at full precision.
pub fn write_panel<W: Write>(dataset: &PanelDataset, sink: W) -> Result<(), DataError> {
    let mut writer = csv::Writer::from_writer(sink);
    let mut header = vec!["country", "year"];
    header.extend(Variable::ALL.iter().map(|v| v.column()));
    writer.write_record(&header)?;
    for o in dataset.observations() {
        let mut row = vec![o.country.clone(), o.year.to_string()];
        row.extend(Variable::ALL.iter().map(|v| v.value(o).to_string()));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Summary statistics for one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableStats {
    pub variable: Variable,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator); 0 when `count == 1`.
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    /// Set when `count == 1`, where the sample standard deviation is undefined.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptiveStats {
    pub variables: Vec<VariableStats>,
}

impl DescriptiveStats {
    pub fn get(&self, var: Variable) -> &VariableStats {
        self.variables.iter().find(|s| s.variable == var).expect("every variable is summarised")
    }
}

/// Mean, sample standard deviation, min and max of every numeric variable.
pub fn summarize(dataset: &PanelDataset) -> Result<DescriptiveStats, DataError> {
    if dataset.is_empty() {
        return Err(DataError::Empty);
    }
    let n = dataset.len();
    let variables = Variable::ALL
        .iter()
        .map(|&var| {
            let values = dataset.column(var);
            let mean = values.iter().sum::<f64>() / n as f64;
            let std_dev = if n > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            VariableStats { variable: var, mean, std_dev, min, max, count: n, degenerate: n == 1 }
        })
        .collect();
    Ok(DescriptiveStats { variables })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "country,year,investment_busd,gdp_growth_pct,co2_mt,carbon_price_usd_t,policy_index,tech_index,renewable_share_pct,energy_intensity_mj_usd";

    fn csv_of(rows: &[&str]) -> String {
        let mut s = HEADER.to_string();
        for r in rows {
            s.push('\n');
            s.push_str(r);
        }
        s
    }

    #[test]
    fn loads_minimal_file() {
        let text = csv_of(&[
            "DEU,2012,12,1.2,800,10,70,80,30,0.1",
            "DEU,2010,10,1.0,820,8,68,79,28,0.11",
            "DEU,2011,11,1.1,810,9,69,79.5,29,0.105",
        ]);
        let ds = load_panel(text.as_bytes(), &ColumnSchema::default()).unwrap();
        assert_eq!(ds.len(), 3);
        assert!(ds.is_balanced());
        let years: Vec<i32> = ds.observations().iter().map(|o| o.year).collect();
        assert_eq!(years, vec![2010, 2011, 2012]);
    }

    #[test]
    fn duplicate_rows_are_rejected() {
        let text = csv_of(&["DEU,2015,12,1.2,800,10,70,80,30,0.1", "DEU,2015,13,1.2,800,10,70,80,30,0.1"]);
        let err = load_panel(text.as_bytes(), &ColumnSchema::default()).unwrap_err();
        assert!(matches!(err, DataError::Duplicate { .. }));
        assert!(err.to_string().contains("DEU, 2015"), "{err}");
    }

    #[test]
    fn missing_column_is_named() {
        let text = "country,year,investment_busd\nDEU,2010,1";
        let err = load_panel(text.as_bytes(), &ColumnSchema::default()).unwrap_err();
        assert!(matches!(err, DataError::MissingColumn(ref c) if c == "gdp_growth_pct"), "{err}");
    }

    #[test]
    fn non_numeric_cell_reports_position() {
        let text = csv_of(&["DEU,2010,12,1.2,800,10,70,80,30,0.1", "DEU,2011,abc,1.2,800,10,70,80,30,0.1"]);
        match load_panel(text.as_bytes(), &ColumnSchema::default()).unwrap_err() {
            DataError::Parse { row, column, value } => {
                assert_eq!(row, 2);
                assert_eq!(column, "investment_busd");
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_value_is_rejected() {
        let text = csv_of(&["DEU,2010,12,,800,10,70,80,30,0.1"]);
        let err = load_panel(text.as_bytes(), &ColumnSchema::default()).unwrap_err();
        assert!(matches!(err, DataError::MissingValue { row: 1, .. }), "{err}");
    }

    #[test]
    fn non_positive_investment_is_a_domain_error() {
        let text = csv_of(&["DEU,2010,0,1.2,800,10,70,80,30,0.1"]);
        let err = load_panel(text.as_bytes(), &ColumnSchema::default()).unwrap_err();
        assert!(matches!(err, DataError::Domain { field: "investment", .. }), "{err}");
    }

    #[test]
    fn unbalanced_panel_is_flagged() {
        let text = csv_of(&[
            "DEU,2010,12,1.2,800,10,70,80,30,0.1",
            "DEU,2011,12,1.2,800,10,70,80,30,0.1",
            "FRA,2010,12,1.2,800,10,70,80,30,0.1",
        ]);
        let ds = load_panel(text.as_bytes(), &ColumnSchema::default()).unwrap();
        assert!(!ds.is_balanced());
        assert_eq!(ds.n_countries(), 2);
    }

    #[test]
    fn custom_schema_maps_columns() {
        let mut schema = ColumnSchema { country: "iso".into(), ..Default::default() };
        schema.variables.insert(Variable::Investment, "inv".into());
        let text = "iso,year,inv,gdp_growth_pct,co2_mt,carbon_price_usd_t,policy_index,tech_index,renewable_share_pct,energy_intensity_mj_usd\nUSA,2020,50,2,5000,0,60,90,12,0.12";
        let ds = load_panel(text.as_bytes(), &schema).unwrap();
        assert_eq!(ds.observations()[0].investment, 50.0);
    }

    #[test]
    fn summary_of_two_rows() {
        let text = csv_of(&["DEU,2010,10,1.2,800,10,70,80,30,0.1", "DEU,2011,30,1.2,800,10,70,80,30,0.1"]);
        let ds = load_panel(text.as_bytes(), &ColumnSchema::default()).unwrap();
        let stats = summarize(&ds).unwrap();
        let inv = stats.get(Variable::Investment);
        assert_eq!(inv.mean, 20.0);
        assert!((inv.std_dev - 200f64.sqrt()).abs() < 1e-3);
        assert_eq!((inv.min, inv.max, inv.count), (10.0, 30.0, 2));
    }

    #[test]
    fn summary_of_single_row_is_degenerate() {
        let text = csv_of(&["DEU,2010,10,1.2,800,10,70,80,30,0.1"]);
        let ds = load_panel(text.as_bytes(), &ColumnSchema::default()).unwrap();
        let s = summarize(&ds).unwrap();
        for v in &s.variables {
            assert!(v.degenerate);
            assert_eq!(v.std_dev, 0.0);
            assert_eq!(v.mean, v.min);
            assert_eq!(v.mean, v.max);
        }
    }

    #[test]
    fn empty_dataset_cannot_be_summarised() {
        let ds = load_panel(HEADER.as_bytes(), &ColumnSchema::default()).unwrap();
        assert!(matches!(summarize(&ds), Err(DataError::Empty)));
    }
}
