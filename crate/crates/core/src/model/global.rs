use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::spectral_radius;
use crate::model::{ModelDims, NationalCoefficients, RegionCoefficients, WeightMatrix};

/// The full cross-section stacked into one finite-order VAR.
///
/// State vector order: national block first, then regions in dataset order —
/// matching the shock-vector convention used everywhere else. Stacking is
/// possible because every cross-block term of the model enters with a lag:
/// foreign averages expand through the weight matrix and the national
/// cross-averages through the 1/N averaging map.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalSystem {
    /// Transition matrices, one per lag, each `L×L` with `L = k·N + ℓ`.
    pub transition: Vec<DMatrix<f64>>,
    /// Stacked intercept.
    pub intercept: DVector<f64>,
}

impl GlobalSystem {
    pub fn dim(&self) -> usize {
        self.intercept.len()
    }

    pub fn lags(&self) -> usize {
        self.transition.len()
    }

    /// Companion-form matrix of size `(L·lags) × (L·lags)`.
    pub fn companion(&self) -> DMatrix<f64> {
        let l = self.dim();
        let g = self.lags();
        let mut comp = DMatrix::zeros(l * g, l * g);
        for (lag, mat) in self.transition.iter().enumerate() {
            comp.view_mut((0, lag * l), (l, l)).copy_from(mat);
        }
        for lag in 1..g {
            comp.view_mut((lag * l, (lag - 1) * l), (l, l))
                .copy_from(&DMatrix::identity(l, l));
        }
        comp
    }

    /// Largest eigenvalue modulus of the companion matrix; < 1 means stable.
    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(&self.companion())
    }

    /// Iterate the system forward. `history` holds the `lags()` pre-sample
    /// states (chronological, one row per period); `innovations` has one row
    /// per simulated period. Returns the simulated rows.
    pub fn simulate(&self, history: &DMatrix<f64>, innovations: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let l = self.dim();
        let g = self.lags();
        if history.nrows() != g || history.ncols() != l {
            return Err(Error::config(format!(
                "history must be {g}x{l}, got {}x{}",
                history.nrows(),
                history.ncols()
            )));
        }
        if innovations.ncols() != l {
            return Err(Error::config(format!(
                "innovations must have {l} columns, got {}",
                innovations.ncols()
            )));
        }
        let t_sim = innovations.nrows();
        let mut out = DMatrix::zeros(t_sim, l);
        let mut state = DVector::zeros(l);
        for t in 0..t_sim {
            state.copy_from(&self.intercept);
            for (lag, mat) in self.transition.iter().enumerate() {
                let back = t as isize - lag as isize - 1;
                let prev: DVector<f64> = if back >= 0 {
                    out.row(back as usize).transpose()
                } else {
                    // Take from history: back = -1 means the last history row.
                    history.row((g as isize + back) as usize).transpose()
                };
                state.gemv(1.0, mat, &prev, 1.0);
            }
            state += innovations.row(t).transpose();
            out.set_row(t, &state.transpose());
        }
        Ok(out)
    }
}

/// Stack all region blocks and the national block into one [`GlobalSystem`].
pub fn stack_global_system(
    w: &WeightMatrix,
    regions: &[RegionCoefficients],
    national: &NationalCoefficients,
    dims: &ModelDims,
) -> Result<GlobalSystem> {
    if regions.len() != dims.regions {
        return Err(Error::config(format!(
            "{} region coefficient sets for {} regions",
            regions.len(),
            dims.regions
        )));
    }
    if w.regions() != dims.regions {
        return Err(Error::config("weight matrix does not match region count"));
    }
    for c in regions {
        c.check_dims(dims)?;
    }
    national.check_dims(dims)?;

    let l = dims.shock_dim();
    let k = dims.region_vars;
    let ell = dims.national_vars;
    let n = dims.regions;
    let maxlag = dims.max_lag();
    let mut transition = vec![DMatrix::zeros(l, l); maxlag];
    let mut intercept = DVector::zeros(l);

    if let Some(c) = &national.intercept {
        intercept.rows_mut(0, ell).copy_from(c);
    }
    for (lag, mat) in national.domestic.iter().enumerate() {
        transition[lag].view_mut((0, 0), (ell, ell)).copy_from(mat);
    }
    for (lag, mat) in national.regional.iter().enumerate() {
        let scaled = mat / n as f64;
        for i in 0..n {
            transition[lag]
                .view_mut((0, dims.region_offset(i)), (ell, k))
                .copy_from(&scaled);
        }
    }

    for (i, coeffs) in regions.iter().enumerate() {
        let off = dims.region_offset(i);
        intercept.rows_mut(off, k).copy_from(&coeffs.intercept);
        for (lag, a) in coeffs.domestic.iter().enumerate() {
            let mut block = transition[lag].view_mut((off, off), (k, k));
            block += a;
        }
        for (lag, b) in coeffs.foreign.iter().enumerate() {
            for j in 0..n {
                let wij = w.get(i, j);
                if wij != 0.0 {
                    let mut block = transition[lag].view_mut((off, dims.region_offset(j)), (k, k));
                    block += b * wij;
                }
            }
        }
        transition[0]
            .view_mut((off, 0), (k, ell))
            .copy_from(&coeffs.national);
    }

    Ok(GlobalSystem {
        transition,
        intercept,
    })
}
