use nalgebra::{DMatrix, DVector};

use super::estimate::{assemble, cluster_covariance};
use super::ols::ols;
use super::{EconometricsError, Estimator, RegressionResult, RegressionSpec, SeKind};
use crate::data::PanelDataset;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomEffectsDiagnostics {
    /// Idiosyncratic error variance, from the within regression.
    pub sigma_e2: f64,
    /// Country-effect variance, from the between regression.
    pub sigma_u2: f64,
    /// The between-based estimate came out negative and was set to zero.
    pub sigma_u2_clamped: bool,
    /// Quasi-demeaning weight per country, in country-index order.
    pub theta: Vec<f64>,
}

/// One-way (country) random-effects FGLS with Swamy-Arora variance components.
///
/// The idiosyncratic variance comes from the within regression with
/// `n − N − k` degrees of freedom; the country variance from the between
/// regression on group means, less `σ_e² / T̄` with `T̄` the harmonic mean group
/// size. Each country's rows are quasi-demeaned with
/// `θ_i = 1 − sqrt(σ_e² / (T_i σ_u² + σ_e²))` and the result fit by OLS with a
/// constant. The specification must not request year fixed effects.
pub fn fit_re(dataset: &PanelDataset, spec: &RegressionSpec) -> Result<RegressionResult, EconometricsError> {
    spec.validate()?;
    if spec.include_year_fe {
        return Err(EconometricsError::InvalidSpec(
            "the random-effects estimator is one-way (country); disable year effects".into(),
        ));
    }
    let n = dataset.len();
    let k = spec.regressors.len();
    let n_groups = dataset.n_countries();
    let groups = dataset.country_ids();
    let mut sizes = vec![0usize; n_groups];
    groups.iter().for_each(|&g| sizes[g] += 1);
    if sizes.iter().any(|&s| s < 2) {
        return Err(EconometricsError::Domain("random effects need at least two observations per country".into()));
    }
    if n_groups <= k + 1 {
        return Err(EconometricsError::Domain(format!(
            "{n_groups} countries cannot identify the between regression with {k} regressors"
        )));
    }
    if n <= n_groups + k {
        return Err(EconometricsError::Domain("no residual degrees of freedom in the within regression".into()));
    }

    let y = spec.dependent.values(dataset)?;
    let xs: Vec<Vec<f64>> = spec.regressors.iter().map(|t| t.values(dataset)).collect::<Result<_, _>>()?;
    let names = spec.regressor_names();
    let group_mean = |v: &[f64]| {
        let mut sums = vec![0.0; n_groups];
        for (&g, x) in groups.iter().zip(v) {
            sums[g] += x;
        }
        sums.iter().zip(&sizes).map(|(s, &c)| s / c as f64).collect::<Vec<f64>>()
    };
    let y_bar = group_mean(&y);
    let x_bar: Vec<Vec<f64>> = xs.iter().map(|c| group_mean(c)).collect();

    // Within regression.
    let y_w = DVector::from_iterator(n, (0..n).map(|i| y[i] - y_bar[groups[i]]));
    let x_w = DMatrix::from_fn(n, k, |i, j| xs[j][i] - x_bar[j][groups[i]]);
    let within = ols(&x_w, &y_w, &names)?;
    let sigma_e2 = within.ssr / (n - n_groups - k) as f64;

    // Between regression on group means with a constant.
    let x_b = DMatrix::from_fn(n_groups, k + 1, |g, j| if j == 0 { 1.0 } else { x_bar[j - 1][g] });
    let mut between_names = vec!["(constant)".to_string()];
    between_names.extend(names.iter().cloned());
    let between = ols(&x_b, &DVector::from_vec(y_bar.clone()), &between_names)?;
    let harmonic = n_groups as f64 / sizes.iter().map(|&s| 1.0 / s as f64).sum::<f64>();
    let raw_u2 = between.ssr / (n_groups - k - 1) as f64 - sigma_e2 / harmonic;
    let sigma_u2_clamped = raw_u2 < 0.0;
    let sigma_u2 = raw_u2.max(0.0);

    let theta: Vec<f64> = sizes
        .iter()
        .map(|&s| {
            let denom = s as f64 * sigma_u2 + sigma_e2;
            if denom > 0.0 { 1.0 - (sigma_e2 / denom).sqrt() } else { 0.0 }
        })
        .collect();

    let y_q = DVector::from_iterator(n, (0..n).map(|i| y[i] - theta[groups[i]] * y_bar[groups[i]]));
    let x_q = DMatrix::from_fn(n, k + 1, |i, j| {
        let g = groups[i];
        if j == 0 { 1.0 - theta[g] } else { xs[j - 1][i] - theta[g] * x_bar[j - 1][g] }
    });
    let gls = ols(&x_q, &y_q, &between_names)?;
    let df = n - k - 1;
    let full_cov = match spec.se_kind {
        SeKind::Classical => &gls.xtx_inv * sigma_e2,
        SeKind::ClusterByCountry => cluster_covariance(&x_q, &gls.residuals, &gls.xtx_inv, &groups, n_groups, k + 1)?,
    };
    let t_df = match spec.se_kind {
        SeKind::Classical => df,
        SeKind::ClusterByCountry => n_groups - 1,
    };
    let beta = gls.beta.rows(1, k).into_owned();
    let cov = full_cov.view((1, 1), (k, k)).into_owned();
    let a = assemble(&beta, &cov, t_df);

    // Within R²: squared correlation of demeaned outcome and demeaned fit.
    let fitted_w = &x_w * &beta;
    let r_squared = {
        let (a, b) = (&y_w, &fitted_w);
        let ma = a.mean();
        let mb = b.mean();
        let cov_ab: f64 = a.iter().zip(b.iter()).map(|(p, q)| (p - ma) * (q - mb)).sum();
        let va: f64 = a.iter().map(|p| (p - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|q| (q - mb).powi(2)).sum();
        if va > 0.0 && vb > 0.0 { (cov_ab * cov_ab / (va * vb)).clamp(0.0, 1.0) } else { 0.0 }
    };

    Ok(RegressionResult {
        estimator: Estimator::RandomEffects(RandomEffectsDiagnostics { sigma_e2, sigma_u2, sigma_u2_clamped, theta }),
        dependent: spec.dependent.to_string(),
        names,
        coefficients: beta.iter().copied().collect(),
        std_errors: a.std_errors,
        t_stats: a.t_stats,
        p_values: a.p_values,
        covariance: cov,
        intercept: Some(gls.beta[0]),
        r_squared,
        f_statistic: a.f_statistic,
        f_p_value: a.f_p_value,
        n_observations: n,
        degrees_freedom: df,
        t_degrees_freedom: t_df,
        se_kind: spec.se_kind,
        sigma2: sigma_e2,
        residuals: gls.residuals.iter().copied().collect(),
    })
}
