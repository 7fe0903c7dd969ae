use nalgebra::{DMatrix, DVector, SymmetricEigen};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{fit_fe, fit_re, EconometricsError, Estimator, RegressionResult, RegressionSpec};
use crate::data::PanelDataset;

#[derive(Debug, Clone, PartialEq)]
pub struct HausmanResult {
    pub statistic: f64,
    pub degrees_freedom: usize,
    pub p_value: f64,
    /// False when Var(b_FE) − Var(b_RE) was not positive definite and the
    /// statistic was computed from its positive eigen-subspace instead.
    pub reliable: bool,
    pub compared: Vec<String>,
}

/// `(b_FE − b_RE)' [V_FE − V_RE]⁻¹ (b_FE − b_RE)` over the coefficients both
/// estimators report, referred to χ² with one degree of freedom per compared
/// coefficient. If the variance difference is not positive definite the
/// Moore-Penrose inverse over its positive eigenvalues is used, the degrees of
/// freedom drop to that rank, and the result is flagged unreliable.
pub fn hausman_test(fe: &RegressionResult, re: &RegressionResult) -> Result<HausmanResult, EconometricsError> {
    if fe.n_observations != re.n_observations {
        return Err(EconometricsError::InvalidSpec(format!(
            "estimates use different samples ({} vs {} observations)",
            fe.n_observations, re.n_observations
        )));
    }
    let pairs: Vec<(usize, usize)> = fe
        .names
        .iter()
        .enumerate()
        .filter_map(|(i, name)| re.index_of(name).map(|j| (i, j)))
        .collect();
    if pairs.is_empty() {
        return Err(EconometricsError::InvalidSpec("no common regressors to compare".into()));
    }
    let m = pairs.len();
    let diff = DVector::from_iterator(m, pairs.iter().map(|&(i, j)| fe.coefficients[i] - re.coefficients[j]));
    let v = DMatrix::from_fn(m, m, |a, b| {
        let (fa, ra) = pairs[a];
        let (fb, rb) = pairs[b];
        fe.covariance[(fa, fb)] - re.covariance[(ra, rb)]
    });
    let v = (&v + v.transpose()) * 0.5;
    let compared = pairs.iter().map(|&(i, _)| fe.names[i].clone()).collect();

    let (statistic, degrees_freedom, reliable) = match v.clone().cholesky() {
        Some(chol) => (diff.dot(&chol.solve(&diff)).max(0.0), m, true),
        None => {
            let eig = SymmetricEigen::new(v);
            let largest = eig.eigenvalues.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            let tol = 1e-12 * largest.max(f64::MIN_POSITIVE);
            let mut stat = 0.0;
            let mut rank = 0;
            for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
                if lambda > tol {
                    let proj = eig.eigenvectors.column(idx).dot(&diff);
                    stat += proj * proj / lambda;
                    rank += 1;
                }
            }
            (stat, rank, false)
        }
    };
    let p_value = if degrees_freedom == 0 {
        1.0
    } else {
        ChiSquared::new(degrees_freedom as f64).expect("df >= 1").sf(statistic)
    };
    Ok(HausmanResult { statistic, degrees_freedom, p_value, reliable, compared })
}

/// Fits one-way (country) fixed and random effects for `spec`'s variables and
/// compares them. Any year effects requested in `spec` are dropped: the test
/// is defined for the one-way pair.
pub fn hausman(
    dataset: &PanelDataset,
    spec: &RegressionSpec,
) -> Result<(RegressionResult, RegressionResult, HausmanResult), EconometricsError> {
    let one_way = spec.clone().with_fixed_effects(true, false);
    let fe = fit_fe(dataset, &one_way)?;
    let re = fit_re(dataset, &one_way)?;
    debug_assert!(matches!(re.estimator, Estimator::RandomEffects(_)));
    let test = hausman_test(&fe, &re)?;
    Ok((fe, re, test))
}
