//! Shared dense linear-algebra helpers for the conditional samplers.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::{Rng, RngExt};
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Relative jitter added to the diagonal when a symmetric factorization
/// fails: `JITTER_REL * trace / dim`.
pub const JITTER_REL: f64 = 1e-8;

/// Cholesky-factor a symmetric positive-definite matrix, retrying once with
/// a small diagonal jitter (`1e-8 * trace/dim`) before giving up.
pub fn chol_psd(mat: DMatrix<f64>, context: &str) -> Result<Cholesky<f64, Dyn>> {
    let dim = mat.nrows();
    if dim == 0 {
        return Err(Error::numerical(format!("{context}: empty matrix")));
    }
    let jitter = JITTER_REL * mat.trace() / dim as f64;
    match Cholesky::new(mat.clone()) {
        Some(c) => Ok(c),
        None => {
            let mut bumped = mat;
            for i in 0..dim {
                bumped[(i, i)] += jitter;
            }
            Cholesky::new(bumped).ok_or_else(|| {
                Error::numerical(format!(
                    "{context}: matrix not positive definite even after diagonal jitter {jitter:.3e}"
                ))
            })
        }
    }
}

/// Largest eigenvalue modulus of a square matrix.
pub fn spectral_radius(mat: &DMatrix<f64>) -> f64 {
    mat.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// A Gaussian conditional posterior `N(mean, precision^{-1})`, stored via the
/// Cholesky factor of the precision so that draws and moments are cheap.
pub struct GaussianPosterior {
    pub mean: DVector<f64>,
    precision_chol: Cholesky<f64, Dyn>,
}

impl GaussianPosterior {
    /// Build from a precision matrix and the right-hand side of the normal
    /// equations (`mean = precision^{-1} rhs`).
    pub fn from_precision(precision: DMatrix<f64>, rhs: &DVector<f64>, context: &str) -> Result<Self> {
        let chol = chol_psd(precision, context)?;
        let mean = chol.solve(rhs);
        Ok(GaussianPosterior {
            mean,
            precision_chol: chol,
        })
    }

    /// Map a standard-normal vector `z` to a draw `mean + L^{-T} z`, where
    /// `L L' = precision`. Exposing the map directly keeps the transformation
    /// testable without randomness: `z = 0` returns the conditional mean.
    pub fn draw_with(&self, z: &DVector<f64>) -> DVector<f64> {
        let l = self.precision_chol.l();
        let shift = l
            .tr_solve_lower_triangular(z)
            .expect("Cholesky factor is nonsingular by construction");
        &self.mean + shift
    }

    /// Draw one sample.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> DVector<f64> {
        let z = standard_normal_vector(rng, self.mean.len());
        self.draw_with(&z)
    }

    /// Posterior covariance (inverse of the precision). Intended for tests
    /// and diagnostics, not hot paths.
    pub fn covariance(&self) -> DMatrix<f64> {
        self.precision_chol.inverse()
    }
}

/// Vector of i.i.d. standard normals.
pub fn standard_normal_vector<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Conditional posterior of a Bayesian linear regression with known,
/// per-observation noise variances `exp(noise_log_var[t])`, an independent
/// Gaussian prior `N(prior_mean[j], prior_var[j])` on each coefficient, and
/// response `y = design * coef + noise`.
///
/// Precision and right-hand side are
/// `P = X' diag(exp(-w)) X + diag(1/prior_var)` and
/// `r = X' diag(exp(-w)) y + prior_mean / prior_var`.
pub fn weighted_regression_posterior(
    design: &DMatrix<f64>,
    response: &DVector<f64>,
    noise_log_var: &DVector<f64>,
    prior_mean: &DVector<f64>,
    prior_var: &DVector<f64>,
    context: &str,
) -> Result<GaussianPosterior> {
    let (t, m) = design.shape();
    if response.len() != t || noise_log_var.len() != t {
        return Err(Error::config(format!(
            "{context}: design has {t} rows but response/noise have {}/{}",
            response.len(),
            noise_log_var.len()
        )));
    }
    if prior_mean.len() != m || prior_var.len() != m {
        return Err(Error::config(format!(
            "{context}: design has {m} columns but prior has {}/{}",
            prior_mean.len(),
            prior_var.len()
        )));
    }
    if prior_var.iter().any(|&v| v <= 0.0) {
        return Err(Error::config(format!("{context}: prior variances must be positive")));
    }

    // Scale rows by the square root of the noise precision, then form the
    // normal equations in one pass.
    let mut scaled = design.clone();
    let mut weighted_response = DVector::zeros(t);
    for i in 0..t {
        let precision = (-noise_log_var[i]).exp();
        if !precision.is_finite() {
            return Err(Error::numerical(format!(
                "{context}: non-finite noise precision at observation {i}"
            )));
        }
        let sqrt_p = precision.sqrt();
        scaled.row_mut(i).scale_mut(sqrt_p);
        weighted_response[i] = precision * response[i];
    }
    let mut precision_mat = scaled.transpose() * &scaled;
    let mut rhs = design.transpose() * weighted_response;
    for j in 0..m {
        precision_mat[(j, j)] += 1.0 / prior_var[j];
        rhs[j] += prior_mean[j] / prior_var[j];
    }
    GaussianPosterior::from_precision(precision_mat, &rhs, context)
}
