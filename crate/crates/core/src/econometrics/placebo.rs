use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ols::ols;
use super::within::{is_absorbed, within_transform, Demeaner};
use super::{EconometricsError, RegressionSpec};
use crate::data::PanelDataset;
use crate::par::{self, Execution};

pub const MIN_PERMUTATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct PlaceboResult {
    /// The permuted regressor.
    pub regressor: String,
    pub observed: f64,
    /// Coefficient under each permutation, in generation order.
    pub permuted: Vec<f64>,
    /// `(1 + #{|b_perm| >= |b_obs|}) / (1 + n_permutations)`.
    pub p_value: f64,
}

/// Permutation placebo test for the first regressor.
///
/// Its values are shuffled across all country-year cells and the fixed-effects
/// model re-estimated. Permutations are drawn up front from a ChaCha generator
/// seeded with `seed`, so the distribution does not depend on evaluation order.
pub fn placebo_test(
    dataset: &PanelDataset,
    spec: &RegressionSpec,
    n_permutations: usize,
    seed: u64,
) -> Result<PlaceboResult, EconometricsError> {
    placebo_test_with(Execution::default(), dataset, spec, n_permutations, seed)
}

pub fn placebo_test_with(
    exec: Execution,
    dataset: &PanelDataset,
    spec: &RegressionSpec,
    n_permutations: usize,
    seed: u64,
) -> Result<PlaceboResult, EconometricsError> {
    if n_permutations < MIN_PERMUTATIONS {
        return Err(EconometricsError::InvalidSpec(format!(
            "placebo test needs at least {MIN_PERMUTATIONS} permutations, got {n_permutations}"
        )));
    }
    let observed_fit = super::fit_fe(dataset, spec)?;
    let observed = observed_fit.coefficients[0];

    let dm = within_transform(dataset, spec)?;
    let demeaner = Demeaner::new(dataset, spec.include_country_fe, spec.include_year_fe);
    let raw = spec.regressors[0].values(dataset)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..raw.len()).collect();
    let permutations: Vec<Vec<usize>> = (0..n_permutations)
        .map(|_| {
            order.shuffle(&mut rng);
            order.clone()
        })
        .collect();

    let estimates = par::map(exec, &permutations, |perm| {
        let shuffled: Vec<f64> = perm.iter().map(|&i| raw[i]).collect();
        let mut col = shuffled.clone();
        demeaner.apply(&mut col)?;
        if is_absorbed(&col, &shuffled) {
            return Err(EconometricsError::Collinear(vec![dm.names[0].clone()]));
        }
        let mut x = dm.x.clone();
        x.set_column(0, &DVector::from_vec(col));
        Ok(ols(&x, &dm.y, &dm.names)?.beta[0])
    });
    let permuted = estimates.into_iter().collect::<Result<Vec<f64>, _>>()?;
    let exceed = permuted.iter().filter(|b| b.abs() >= observed.abs()).count();
    Ok(PlaceboResult {
        regressor: dm.names[0].clone(),
        observed,
        permuted,
        p_value: (1 + exceed) as f64 / (1 + n_permutations) as f64,
    })
}
