use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Cross-section regression data: one response per region plus named
/// covariate columns, complete cases only.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionInput {
    pub response: Vec<f64>,
    pub covariate_names: Vec<String>,
    /// One column per covariate, each aligned with `response`.
    pub covariates: Vec<Vec<f64>>,
}

impl RegressionInput {
    fn validate(&self) -> Result<()> {
        if self.covariates.len() != self.covariate_names.len() {
            return Err(Error::config(format!(
                "{} covariate columns but {} names",
                self.covariates.len(),
                self.covariate_names.len()
            )));
        }
        let n = self.response.len();
        for (name, col) in self.covariate_names.iter().zip(&self.covariates) {
            if col.len() != n {
                return Err(Error::config(format!(
                    "covariate {name:?} has {} rows, response has {n}",
                    col.len()
                )));
            }
        }
        let p = self.covariates.len() + 1;
        if n <= p {
            return Err(Error::config(format!(
                "need more observations ({n}) than coefficients ({p})"
            )));
        }
        if self
            .response
            .iter()
            .chain(self.covariates.iter().flatten())
            .any(|v| !v.is_finite())
        {
            return Err(Error::config("regression inputs must be finite"));
        }
        Ok(())
    }
}

/// One estimated term of the regression.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientEstimate {
    pub name: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t_stat: f64,
    /// Two-sided p-value against zero.
    pub p_value: f64,
    /// `***`, `**`, `*` at the 0.01 / 0.05 / 0.1 two-sided levels.
    pub stars: &'static str,
}

/// Least-squares fit with classical (homoskedastic) standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionSummary {
    /// Intercept first, then covariates in input order.
    pub coefficients: Vec<CoefficientEstimate>,
    pub r_squared: f64,
    pub observations: usize,
    pub residual_df: usize,
}

fn stars_for(p_value: f64) -> &'static str {
    if p_value < 0.01 {
        "***"
    } else if p_value < 0.05 {
        "**"
    } else if p_value < 0.1 {
        "*"
    } else {
        ""
    }
}

/// Ordinary least squares of the response on an intercept and the named
/// covariates. A rank-deficient design is rejected with the collinear
/// columns named. Standard errors are classical: `s²·(X'X)⁻¹` with
/// `s² = RSS/(n−p)`.
pub fn ols_regress(input: &RegressionInput) -> Result<RegressionSummary> {
    input.validate()?;
    let n = input.response.len();
    let p = input.covariates.len() + 1;

    let mut x = DMatrix::zeros(n, p);
    for r in 0..n {
        x[(r, 0)] = 1.0;
    }
    for (c, col) in input.covariates.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            x[(r, c + 1)] = *v;
        }
    }
    let y = DVector::from_column_slice(&input.response);

    // Rank check via column-pivoted QR: columns pivoted past the effective
    // rank are linear combinations of the ones before them.
    let qr = x.clone().col_piv_qr();
    let r_mat = qr.r();
    let tol = f64::EPSILON * (n.max(p)) as f64 * r_mat[(0, 0)].abs().max(1.0);
    let rank = (0..p).take_while(|&i| r_mat[(i, i)].abs() > tol).count();
    if rank < p {
        // Track where each original column lands under the pivoting: the
        // columns pivoted past the effective rank are the dependent ones.
        let mut order = DMatrix::from_fn(1, p, |_, j| j);
        qr.p().permute_columns(&mut order);
        let mut dependent: Vec<String> = (rank..p)
            .map(|i| {
                let original = order[(0, i)];
                if original == 0 {
                    "intercept".to_string()
                } else {
                    input.covariate_names[original - 1].clone()
                }
            })
            .collect();
        dependent.sort();
        return Err(Error::numerical(format!(
            "design matrix is rank deficient (rank {rank} of {p}); collinear columns: {}",
            dependent.join(", ")
        )));
    }

    let xtx = x.transpose() * &x;
    let xty = x.transpose() * &y;
    let xtx_inv = xtx
        .try_inverse()
        .ok_or_else(|| Error::numerical("normal equations are singular"))?;
    let beta = &xtx_inv * &xty;

    let fitted = &x * &beta;
    let residuals = &y - &fitted;
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean_y).powi(2)).sum();
    if tss == 0.0 {
        return Err(Error::numerical("response is constant; R² is undefined"));
    }
    let df = n - p;
    let sigma2 = rss / df as f64;
    let student = StudentsT::new(0.0, 1.0, df as f64)
        .map_err(|e| Error::numerical(format!("t distribution with {df} df: {e}")))?;

    let coefficients = (0..p)
        .map(|j| {
            let name = if j == 0 {
                "intercept".to_string()
            } else {
                input.covariate_names[j - 1].clone()
            };
            let std_error = (sigma2 * xtx_inv[(j, j)]).sqrt();
            let t_stat = if std_error > 0.0 {
                beta[j] / std_error
            } else {
                f64::INFINITY * beta[j].signum()
            };
            let p_value = if t_stat.is_finite() {
                2.0 * (1.0 - student.cdf(t_stat.abs()))
            } else {
                0.0
            };
            CoefficientEstimate {
                name,
                coefficient: beta[j],
                std_error,
                t_stat,
                p_value,
                stars: stars_for(p_value),
            }
        })
        .collect();

    Ok(RegressionSummary {
        coefficients,
        r_squared: 1.0 - rss / tss,
        observations: n,
        residual_df: df,
    })
}
