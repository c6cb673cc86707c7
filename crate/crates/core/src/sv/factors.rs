use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{chol_psd, standard_normal_vector, weighted_regression_posterior, GaussianPosterior};

/// Gaussian conditional of the factor vector at one period.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorConditional {
    pub mean: DVector<f64>,
    pub covariance: DMatrix<f64>,
}

/// Conditional distribution of `f_t` given the stacked residual `ε_t`, the
/// loadings, the factor variances `H_t` (diagonal, passed as variances, not
/// logs), and the assembled shock covariance `Θ_t = Λ H_t Λ' + Ω_t`:
/// with `Υ_t = H_t Λ' Θ_t⁻¹`, the mean is `Υ_t ε_t` and the covariance
/// `H_t − Υ_t Θ_t Υ_t'`.
pub fn factor_conditional(
    loadings: &DMatrix<f64>,
    factor_vars: &DVector<f64>,
    theta: &DMatrix<f64>,
    residual: &DVector<f64>,
) -> Result<FactorConditional> {
    let (l, f) = loadings.shape();
    if factor_vars.len() != f || theta.shape() != (l, l) || residual.len() != l {
        return Err(Error::config(format!(
            "factor conditional shape mismatch: loadings {l}x{f}, {} variances, theta {}x{}, residual {}",
            factor_vars.len(),
            theta.nrows(),
            theta.ncols(),
            residual.len()
        )));
    }
    let chol = chol_psd(theta.clone(), "shock covariance")?;
    // Υ' = Θ⁻¹ (Λ H): solve rather than invert.
    let mut lambda_h = loadings.clone();
    for (j, mut col) in lambda_h.column_iter_mut().enumerate() {
        col *= factor_vars[j];
    }
    let upsilon_t = chol.solve(&lambda_h);
    let mean = upsilon_t.transpose() * residual;
    // H − Υ Θ Υ' = H − (Λ H)' Θ⁻¹ (Λ H).
    let mut covariance = DMatrix::from_diagonal(factor_vars) - lambda_h.transpose() * &upsilon_t;
    // Symmetrize against roundoff before later factorizations.
    for a in 0..f {
        for b in (a + 1)..f {
            let avg = 0.5 * (covariance[(a, b)] + covariance[(b, a)]);
            covariance[(a, b)] = avg;
            covariance[(b, a)] = avg;
        }
    }
    Ok(FactorConditional { mean, covariance })
}

impl FactorConditional {
    /// Deterministic draw from supplied standard-normal innovations.
    pub fn draw_with(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
        let chol = chol_psd(self.covariance.clone(), "factor conditional covariance")?;
        Ok(&self.mean + chol.l() * z)
    }
}

/// Draw the full factor history: one independent Gaussian draw per period.
/// `factor_log_vars` and `idio_log_vars` are the log-variance paths (rows =
/// periods); `residuals` holds the stacked residual vectors as rows.
pub fn sample_factors_path<R: Rng>(
    loadings: &DMatrix<f64>,
    factor_log_vars: &DMatrix<f64>,
    idio_log_vars: &DMatrix<f64>,
    residuals: &DMatrix<f64>,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let f = loadings.ncols();
    let t = residuals.nrows();
    let mut zs = Vec::with_capacity(t);
    for _ in 0..t {
        zs.push(standard_normal_vector(rng, f));
    }
    sample_factors_path_with(loadings, factor_log_vars, idio_log_vars, residuals, |t| {
        zs[t].clone()
    })
}

/// [`sample_factors_path`] with caller-supplied innovations, so tests can
/// extract conditional means by passing zeros.
pub fn sample_factors_path_with(
    loadings: &DMatrix<f64>,
    factor_log_vars: &DMatrix<f64>,
    idio_log_vars: &DMatrix<f64>,
    residuals: &DMatrix<f64>,
    mut innovations: impl FnMut(usize) -> DVector<f64>,
) -> Result<DMatrix<f64>> {
    let (l, f) = loadings.shape();
    let t = residuals.nrows();
    if factor_log_vars.shape() != (t, f) {
        return Err(Error::config(format!(
            "factor log-variance path is {}x{}, expected {t}x{f}",
            factor_log_vars.nrows(),
            factor_log_vars.ncols()
        )));
    }
    if idio_log_vars.shape() != (t, l) || residuals.ncols() != l {
        return Err(Error::config(format!(
            "idiosyncratic path {}x{} / residuals {}x{} inconsistent with {l} series",
            idio_log_vars.nrows(),
            idio_log_vars.ncols(),
            residuals.nrows(),
            residuals.ncols()
        )));
    }
    let mut out = DMatrix::zeros(t, f);
    for period in 0..t {
        let factor_vars = DVector::from_iterator(
            f,
            factor_log_vars.row(period).iter().map(|h| h.exp()),
        );
        let mut theta = DMatrix::zeros(l, l);
        for j in 0..f {
            let col = loadings.column(j);
            let var = factor_vars[j];
            for b in 0..l {
                let scaled = var * col[b];
                for a in 0..l {
                    theta[(a, b)] += col[a] * scaled;
                }
            }
        }
        for r in 0..l {
            theta[(r, r)] += idio_log_vars[(period, r)].exp();
        }
        let residual = residuals.row(period).transpose();
        let cond = factor_conditional(loadings, &factor_vars, &theta, &residual)
            .map_err(|e| Error::numerical(format!("period {period}: {e}")))?;
        let draw = cond
            .draw_with(&innovations(period))
            .map_err(|e| Error::numerical(format!("period {period}: {e}")))?;
        out.set_row(period, &draw.transpose());
    }
    Ok(out)
}

/// Posterior for one loading row: regress that series' residuals on the
/// factor path with heteroscedastic noise `exp(ω_{r,t})` and independent
/// N(0, loading_var) priors.
pub fn loading_posterior(
    residual_col: &DVector<f64>,
    factors: &DMatrix<f64>,
    idio_log_var_col: &DVector<f64>,
    loading_var: f64,
) -> Result<GaussianPosterior> {
    let f = factors.ncols();
    if loading_var <= 0.0 {
        return Err(Error::config("loading prior variance must be positive"));
    }
    weighted_regression_posterior(
        factors,
        residual_col,
        idio_log_var_col,
        &DVector::zeros(f),
        &DVector::from_element(f, loading_var),
        "loading row",
    )
}

/// Draw the full L×F loading matrix, row by row.
pub fn sample_loadings<R: Rng>(
    residuals: &DMatrix<f64>,
    factors: &DMatrix<f64>,
    idio_log_vars: &DMatrix<f64>,
    loading_var: f64,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let (t, l) = residuals.shape();
    let f = factors.ncols();
    if factors.nrows() != t || idio_log_vars.shape() != (t, l) {
        return Err(Error::config(format!(
            "loadings: residuals {t}x{l}, factors {}x{f}, idio path {}x{}",
            factors.nrows(),
            idio_log_vars.nrows(),
            idio_log_vars.ncols()
        )));
    }
    let mut loadings = DMatrix::zeros(l, f);
    for r in 0..l {
        let residual_col = residuals.column(r).into_owned();
        let idio_col = idio_log_vars.column(r).into_owned();
        let posterior = loading_posterior(&residual_col, factors, &idio_col, loading_var)
            .map_err(|e| Error::numerical(format!("series {r}: {e}")))?;
        let draw = posterior.sample(rng);
        loadings.set_row(r, &draw.transpose());
    }
    Ok(loadings)
}
