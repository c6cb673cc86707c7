use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Shock covariance implied by the factor structure at one time point:
/// `Θ = Λ diag(exp h) Λ' + diag(exp ω)`.
///
/// The result is symmetric by construction and positive definite whenever
/// all idiosyncratic log variances are finite.
pub fn assemble_shock_covariance(
    loadings: &DMatrix<f64>,
    factor_log_var: &DVector<f64>,
    idio_log_var: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    let (l, f) = loadings.shape();
    if factor_log_var.len() != f {
        return Err(Error::config(format!(
            "loadings have {f} factor columns but {} factor variances given",
            factor_log_var.len()
        )));
    }
    if idio_log_var.len() != l {
        return Err(Error::config(format!(
            "loadings have {l} rows but {} idiosyncratic variances given",
            idio_log_var.len()
        )));
    }
    if loadings.iter().any(|x| !x.is_finite())
        || factor_log_var.iter().any(|x| !x.is_finite())
        || idio_log_var.iter().any(|x| !x.is_finite())
    {
        return Err(Error::numerical("non-finite inputs to covariance assembly"));
    }
    let mut theta = DMatrix::zeros(l, l);
    for j in 0..f {
        let var = factor_log_var[j].exp();
        let col = loadings.column(j);
        // Accumulate var * col * col' on the lower triangle, then mirror.
        for b in 0..l {
            let scaled = var * col[b];
            for a in b..l {
                theta[(a, b)] += col[a] * scaled;
            }
        }
    }
    for b in 0..l {
        for a in (b + 1)..l {
            theta[(b, a)] = theta[(a, b)];
        }
    }
    for a in 0..l {
        theta[(a, a)] += idio_log_var[a].exp();
    }
    Ok(theta)
}
