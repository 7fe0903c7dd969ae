use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use super::ols::{cluster_meat, ols, wald};
use super::within::within_transform;
use super::{EconometricsError, Estimator, RegressionResult, RegressionSpec, SeKind};
use crate::data::PanelDataset;

pub(crate) fn two_sided_t(t: f64, df: usize) -> f64 {
    if !t.is_finite() {
        return if t.is_nan() { f64::NAN } else { 0.0 };
    }
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

pub(crate) fn f_p_value(f: f64, k: usize, df: usize) -> f64 {
    if !f.is_finite() {
        return if f.is_nan() { f64::NAN } else { 0.0 };
    }
    FisherSnedecor::new(k as f64, df as f64).expect("positive df").sf(f.max(0.0))
}

/// Sandwich covariance `B meat B` with the small-sample cluster factor.
pub(crate) fn cluster_covariance(
    x: &DMatrix<f64>,
    residuals: &DVector<f64>,
    bread: &DMatrix<f64>,
    groups: &[usize],
    n_groups: usize,
    total_params: usize,
) -> Result<DMatrix<f64>, EconometricsError> {
    if n_groups < 2 {
        return Err(EconometricsError::Domain("clustered standard errors need at least two countries".into()));
    }
    let n = x.nrows() as f64;
    let g = n_groups as f64;
    let factor = g / (g - 1.0) * (n - 1.0) / (n - total_params as f64);
    Ok(bread * cluster_meat(x, residuals, groups, n_groups) * bread * factor)
}

pub(crate) struct Assembled {
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub f_statistic: f64,
    pub f_p_value: f64,
}

pub(crate) fn assemble(beta: &DVector<f64>, cov: &DMatrix<f64>, t_df: usize) -> Assembled {
    let k = beta.len();
    let std_errors: Vec<f64> = (0..k).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();
    let t_stats: Vec<f64> = (0..k).map(|j| beta[j] / std_errors[j]).collect();
    let p_values = t_stats.iter().map(|&t| two_sided_t(t, t_df)).collect();
    let f_statistic = wald(beta, cov) / k as f64;
    let f_p_value = f_p_value(f_statistic, k, t_df);
    Assembled { std_errors, t_stats, p_values, f_statistic, f_p_value }
}

/// Fixed-effects OLS on within-transformed data.
///
/// Residual degrees of freedom subtract the absorbed effects, `N + T − 1` for a
/// connected two-way panel, so classical standard errors equal those of the
/// dummy-variable regression.
pub fn fit_fe(dataset: &PanelDataset, spec: &RegressionSpec) -> Result<RegressionResult, EconometricsError> {
    let dm = within_transform(dataset, spec)?;
    let n = dm.y.len();
    let k = dm.x.ncols();
    let used = k + dm.absorbed_df;
    if n <= used {
        return Err(EconometricsError::Domain(format!(
            "{n} observations leave no residual degrees of freedom for {k} regressors and {} absorbed effects",
            dm.absorbed_df
        )));
    }
    let df = n - used;
    let fit = ols(&dm.x, &dm.y, &dm.names)?;
    let sigma2 = fit.ssr / df as f64;
    let (cov, t_df) = match spec.se_kind {
        SeKind::Classical => (&fit.xtx_inv * sigma2, df),
        SeKind::ClusterByCountry => (
            cluster_covariance(&dm.x, &fit.residuals, &fit.xtx_inv, &dm.countries, dm.n_countries, used)?,
            dm.n_countries - 1,
        ),
    };
    let sst = dm.y.norm_squared();
    let r_squared = if sst > 0.0 { (1.0 - fit.ssr / sst).clamp(0.0, 1.0) } else { 0.0 };
    let a = assemble(&fit.beta, &cov, t_df);
    Ok(RegressionResult {
        estimator: Estimator::FixedEffects { country: spec.include_country_fe, year: spec.include_year_fe },
        dependent: spec.dependent.to_string(),
        names: dm.names,
        coefficients: fit.beta.iter().copied().collect(),
        std_errors: a.std_errors,
        t_stats: a.t_stats,
        p_values: a.p_values,
        covariance: cov,
        intercept: None,
        r_squared,
        f_statistic: a.f_statistic,
        f_p_value: a.f_p_value,
        n_observations: n,
        degrees_freedom: df,
        t_degrees_freedom: t_df,
        se_kind: spec.se_kind,
        sigma2,
        residuals: fit.residuals.iter().copied().collect(),
    })
}
