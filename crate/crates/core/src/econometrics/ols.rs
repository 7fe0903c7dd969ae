use nalgebra::{DMatrix, DVector};

use super::EconometricsError;

const RANK_TOL: f64 = 1e-10;

pub(crate) struct OlsFit {
    pub beta: DVector<f64>,
    /// (X'X)⁻¹
    pub xtx_inv: DMatrix<f64>,
    pub residuals: DVector<f64>,
    pub ssr: f64,
}

/// Names of columns that are (numerically) linear combinations of earlier ones.
pub(crate) fn dependent_columns(x: &DMatrix<f64>, names: &[String]) -> Vec<String> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut dependent = Vec::new();
    for (j, name) in names.iter().enumerate() {
        let col = x.column(j).into_owned();
        let norm = col.norm();
        let mut r = col.clone();
        // Two Gram-Schmidt passes keep the orthogonalisation accurate.
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dot(&r);
                r.axpy(-proj, q, 1.0);
            }
        }
        let rn = r.norm();
        if norm == 0.0 || rn <= RANK_TOL * norm {
            dependent.push(name.clone());
        } else {
            basis.push(r / rn);
        }
    }
    dependent
}

/// Least squares via Householder QR, after a rank check.
pub(crate) fn ols(x: &DMatrix<f64>, y: &DVector<f64>, names: &[String]) -> Result<OlsFit, EconometricsError> {
    let (n, k) = x.shape();
    if n <= k {
        return Err(EconometricsError::Domain(format!("{n} observations cannot identify {k} coefficients")));
    }
    let dependent = dependent_columns(x, names);
    if !dependent.is_empty() {
        return Err(EconometricsError::Collinear(dependent));
    }
    let qr = x.clone().qr();
    let r = qr.r();
    let qty = qr.q().transpose() * y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| EconometricsError::Collinear(names.to_vec()))?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| EconometricsError::Collinear(names.to_vec()))?;
    let xtx_inv = &r_inv * r_inv.transpose();
    let residuals = y - x * &beta;
    let ssr = residuals.norm_squared();
    Ok(OlsFit { beta, xtx_inv, residuals, ssr })
}

/// Σ_g (X_g'u_g)(X_g'u_g)'.
pub(crate) fn cluster_meat(x: &DMatrix<f64>, residuals: &DVector<f64>, groups: &[usize], n_groups: usize) -> DMatrix<f64> {
    let k = x.ncols();
    let mut scores = DMatrix::<f64>::zeros(n_groups, k);
    for (i, &g) in groups.iter().enumerate() {
        for j in 0..k {
            scores[(g, j)] += x[(i, j)] * residuals[i];
        }
    }
    scores.transpose() * scores
}

/// β'V⁻¹β, or NaN when V is not positive definite.
pub(crate) fn wald(beta: &DVector<f64>, cov: &DMatrix<f64>) -> f64 {
    match cov.clone().cholesky() {
        Some(chol) => beta.dot(&chol.solve(beta)),
        None => f64::NAN,
    }
}
