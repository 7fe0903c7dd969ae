use nalgebra::{DMatrix, DVector};

use super::{EconometricsError, RegressionSpec};
use crate::data::PanelDataset;

const MAX_SWEEPS: usize = 100_000;
const SWEEP_TOL: f64 = 1e-12;

/// Removes group means for the fixed effects included in a specification.
#[derive(Debug, Clone)]
pub(crate) struct Demeaner {
    countries: Vec<usize>,
    years: Vec<usize>,
    country_counts: Vec<usize>,
    year_counts: Vec<usize>,
    country_fe: bool,
    year_fe: bool,
    balanced: bool,
}

impl Demeaner {
    pub(crate) fn new(dataset: &PanelDataset, country_fe: bool, year_fe: bool) -> Self {
        let countries = dataset.country_ids();
        let years = dataset.year_ids();
        let mut country_counts = vec![0; dataset.n_countries()];
        let mut year_counts = vec![0; dataset.n_years()];
        for (&c, &y) in countries.iter().zip(&years) {
            country_counts[c] += 1;
            year_counts[y] += 1;
        }
        Demeaner {
            countries,
            years,
            country_counts,
            year_counts,
            country_fe,
            year_fe,
            balanced: dataset.is_balanced(),
        }
    }

    pub(crate) fn countries(&self) -> &[usize] {
        &self.countries
    }

    fn group_means(groups: &[usize], counts: &[usize], v: &[f64]) -> Vec<f64> {
        let mut sums = vec![0.0; counts.len()];
        for (&g, x) in groups.iter().zip(v) {
            sums[g] += x;
        }
        sums.iter().zip(counts).map(|(s, &n)| if n > 0 { s / n as f64 } else { 0.0 }).collect()
    }

    fn subtract_means(groups: &[usize], counts: &[usize], v: &mut [f64]) -> f64 {
        let means = Self::group_means(groups, counts, v);
        let mut largest = 0.0f64;
        for (&g, x) in groups.iter().zip(v.iter_mut()) {
            *x -= means[g];
            largest = largest.max(means[g].abs());
        }
        largest
    }

    /// Degrees of freedom absorbed by the effects (including the implicit constant).
    pub(crate) fn absorbed_df(&self) -> usize {
        let nc = self.country_counts.len();
        let ny = self.year_counts.len();
        match (self.country_fe, self.year_fe) {
            (true, true) => nc + ny - self.components(),
            (true, false) => nc,
            (false, true) => ny,
            (false, false) => 1,
        }
    }

    /// Connected components of the bipartite country-year observation graph.
    fn components(&self) -> usize {
        let nc = self.country_counts.len();
        let mut parent: Vec<usize> = (0..nc + self.year_counts.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (&c, &y) in self.countries.iter().zip(&self.years) {
            let (a, b) = (find(&mut parent, c), find(&mut parent, nc + y));
            if a != b {
                parent[a] = b;
            }
        }
        (0..parent.len()).filter(|&i| find(&mut parent, i) == i).count()
    }

    pub(crate) fn apply(&self, v: &mut [f64]) -> Result<(), EconometricsError> {
        match (self.country_fe, self.year_fe) {
            (false, false) => {
                let mean = v.iter().sum::<f64>() / v.len() as f64;
                v.iter_mut().for_each(|x| *x -= mean);
            }
            (true, false) => {
                Self::subtract_means(&self.countries, &self.country_counts, v);
            }
            (false, true) => {
                Self::subtract_means(&self.years, &self.year_counts, v);
            }
            (true, true) if self.balanced => {
                // x - country mean - year mean + grand mean.
                let grand = v.iter().sum::<f64>() / v.len() as f64;
                let cm = Self::group_means(&self.countries, &self.country_counts, v);
                let ym = Self::group_means(&self.years, &self.year_counts, v);
                for ((x, &c), &y) in v.iter_mut().zip(&self.countries).zip(&self.years) {
                    *x = *x - cm[c] - ym[y] + grand;
                }
            }
            (true, true) => {
                let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
                for _ in 0..MAX_SWEEPS {
                    let a = Self::subtract_means(&self.countries, &self.country_counts, v);
                    let b = Self::subtract_means(&self.years, &self.year_counts, v);
                    if a.max(b) <= SWEEP_TOL * scale {
                        return Ok(());
                    }
                }
                return Err(EconometricsError::NotConverged(MAX_SWEEPS));
            }
        }
        Ok(())
    }
}

/// Transformed regression inputs.
#[derive(Debug, Clone)]
pub struct DesignMatrices {
    pub y: DVector<f64>,
    pub x: DMatrix<f64>,
    pub names: Vec<String>,
    /// Country index per row, for clustering.
    pub countries: Vec<usize>,
    pub n_countries: usize,
    /// Degrees of freedom absorbed by the removed effects.
    pub absorbed_df: usize,
}

/// True when every transformed entry is negligible next to the raw values.
pub(crate) fn is_absorbed(transformed: &[f64], original: &[f64]) -> bool {
    let scale = original.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    transformed.iter().all(|x| x.abs() <= 1e-9 * scale)
}

/// Demeans the dependent variable and regressors for the specification's
/// fixed effects. Two-way demeaning is exact on balanced panels and uses
/// alternating projections otherwise. Without any fixed effect the grand mean
/// is removed, which is equivalent to including a constant.
pub fn within_transform(dataset: &PanelDataset, spec: &RegressionSpec) -> Result<DesignMatrices, EconometricsError> {
    spec.validate()?;
    if dataset.is_empty() {
        return Err(EconometricsError::Domain("dataset is empty".into()));
    }
    let demeaner = Demeaner::new(dataset, spec.include_country_fe, spec.include_year_fe);
    let n = dataset.len();
    let k = spec.regressors.len();

    let mut y = spec.dependent.values(dataset)?;
    demeaner.apply(&mut y)?;

    let mut x = DMatrix::zeros(n, k);
    let mut absorbed = Vec::new();
    for (j, term) in spec.regressors.iter().enumerate() {
        let raw = term.values(dataset)?;
        let mut col = raw.clone();
        demeaner.apply(&mut col)?;
        if is_absorbed(&col, &raw) {
            absorbed.push(term.to_string());
        }
        x.set_column(j, &DVector::from_vec(col));
    }
    if !absorbed.is_empty() {
        return Err(EconometricsError::Collinear(absorbed));
    }
    Ok(DesignMatrices {
        y: DVector::from_vec(y),
        x,
        names: spec.regressor_names(),
        countries: demeaner.countries().to_vec(),
        n_countries: dataset.n_countries(),
        absorbed_df: demeaner.absorbed_df(),
    })
}
