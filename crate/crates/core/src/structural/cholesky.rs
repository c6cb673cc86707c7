use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::JITTER_REL;

/// Ordering and normalization of the identified shock.
///
/// The orthogonalization is a plain Cholesky factorization after permuting
/// the system so the uncertainty variable comes first; `ordering[p]` names
/// the original variable placed at position `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShockDesign {
    /// Permutation of the global variables, uncertainty variable first.
    pub ordering: Vec<usize>,
    /// Position of the shocked variable inside the ordering.
    pub shock_index: usize,
    /// Optional fixed impact size: when set, the shock column is rescaled so
    /// the shocked variable moves by exactly this amount on impact. The
    /// default (None) keeps the one-standard-error impact the factorization
    /// implies.
    pub normalize_impact: Option<f64>,
}

impl ShockDesign {
    /// The default design: variables stay in their stacked order (the
    /// uncertainty variable already leads the national block) and the shock
    /// is one standard error of that first variable.
    pub fn uncertainty_first(l: usize) -> Self {
        ShockDesign {
            ordering: (0..l).collect(),
            shock_index: 0,
            normalize_impact: None,
        }
    }

    pub fn validate(&self, l: usize) -> Result<()> {
        if self.ordering.len() != l {
            return Err(Error::config(format!(
                "ordering lists {} variables, system has {l}",
                self.ordering.len()
            )));
        }
        let mut seen = vec![false; l];
        for &v in &self.ordering {
            if v >= l || seen[v] {
                return Err(Error::config(format!(
                    "ordering is not a permutation of 0..{l}"
                )));
            }
            seen[v] = true;
        }
        if self.shock_index >= l {
            return Err(Error::config(format!(
                "shock index {} out of range for {l} variables",
                self.shock_index
            )));
        }
        if let Some(size) = self.normalize_impact {
            if !(size.is_finite() && size > 0.0) {
                return Err(Error::config(format!(
                    "normalized impact size must be positive and finite, got {size}"
                )));
            }
        }
        Ok(())
    }
}

/// Plain lower-triangular Cholesky factorization, written out longhand so
/// failures can name the offending leading minor. Retries once with a small
/// relative diagonal jitter before giving up.
fn lower_cholesky(mat: &DMatrix<f64>) -> std::result::Result<DMatrix<f64>, usize> {
    let n = mat.nrows();
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = mat[(j, j)];
        for k in 0..j {
            diag -= l[(j, k)] * l[(j, k)];
        }
        if diag <= 0.0 || !diag.is_finite() {
            return Err(j);
        }
        l[(j, j)] = diag.sqrt();
        for i in (j + 1)..n {
            let mut v = mat[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / l[(j, j)];
        }
    }
    Ok(l)
}

/// Orthogonalize a shock covariance: permute `theta` to the design's
/// ordering, then return the lower-triangular factor `C` with `C·C' = Θ`
/// (permuted). Column `s` is the impact response to one standard error of
/// orthogonal shock `s`.
pub fn identify_cholesky(theta: &DMatrix<f64>, ordering: &[usize]) -> Result<DMatrix<f64>> {
    let l = theta.nrows();
    if theta.ncols() != l || l == 0 {
        return Err(Error::config(format!(
            "covariance must be square and nonempty, got {}x{}",
            theta.nrows(),
            theta.ncols()
        )));
    }
    if ordering.len() != l {
        return Err(Error::config(format!(
            "ordering lists {} variables, covariance has {l}",
            ordering.len()
        )));
    }
    let permuted = DMatrix::from_fn(l, l, |a, b| theta[(ordering[a], ordering[b])]);
    match lower_cholesky(&permuted) {
        Ok(c) => Ok(c),
        Err(_) => {
            let jitter = JITTER_REL * permuted.trace() / l as f64;
            let mut bumped = permuted;
            for i in 0..l {
                bumped[(i, i)] += jitter;
            }
            lower_cholesky(&bumped).map_err(|minor| {
                Error::numerical(format!(
                    "covariance is not positive definite: leading minor {} fails even \
                     after diagonal jitter {jitter:.3e}",
                    minor + 1
                ))
            })
        }
    }
}

/// Map a factor's rows back to the original variable order: entry
/// `(ordering[p], s)` of the result is `chol[(p, s)]`. Column `s` is then
/// the impact vector of orthogonal shock `s` expressed in the stacked
/// system's own coordinates, and the columns' outer products still sum to
/// the unpermuted covariance.
pub fn impact_columns(chol: &DMatrix<f64>, ordering: &[usize]) -> DMatrix<f64> {
    let l = chol.nrows();
    let mut out = DMatrix::zeros(l, l);
    for p in 0..l {
        for s in 0..l {
            out[(ordering[p], s)] = chol[(p, s)];
        }
    }
    out
}
