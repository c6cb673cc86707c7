use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{
    foreign_averages, national_cross_averages, ModelDims, PanelDataset, WeightMatrix,
};

/// Regression layout for one block of the model: the stacked design matrix
/// over the effective sample and the matching left-hand-side observations.
///
/// Row `t` of `design` corresponds to calendar index `max_lag + t`; the same
/// design matrix serves every equation of the block, since all equations of
/// a block share regressors.
#[derive(Clone, Debug)]
pub struct BlockDesign {
    /// (T − max_lag) × m regressor matrix.
    pub design: DMatrix<f64>,
    /// (T − max_lag) × (equations) left-hand-side values.
    pub targets: DMatrix<f64>,
}

/// Design matrix for one region's equations: columns are
/// `[1, own lags 1..P (k each), cross-average lags 1..Q (k each),
/// national lag 1 (ℓ)]`.
pub fn region_design(
    data: &PanelDataset,
    w: &WeightMatrix,
    dims: &ModelDims,
    region: usize,
) -> Result<BlockDesign> {
    data.check_dims(dims)?;
    if region >= dims.regions {
        return Err(Error::config(format!(
            "region index {region} out of range (N = {})",
            dims.regions
        )));
    }
    let maxlag = dims.max_lag();
    if data.periods() <= maxlag {
        return Err(Error::config(format!(
            "{} periods are not enough for lag order {maxlag}",
            data.periods()
        )));
    }
    let averages = foreign_averages(data.regions(), w)?;
    Ok(region_design_with_averages(data, &averages[region], dims, region))
}

/// Same as [`region_design`] but with the region's cross-average series
/// precomputed, so the Gibbs driver can share one averaging pass.
pub fn region_design_with_averages(
    data: &PanelDataset,
    avg: &DMatrix<f64>,
    dims: &ModelDims,
    region: usize,
) -> BlockDesign {
    let maxlag = dims.max_lag();
    let t_eff = dims.effective_periods();
    let k = dims.region_vars;
    let ell = dims.national_vars;
    let own = data.region(region);
    let national = data.national();

    let mut design = DMatrix::zeros(t_eff, dims.region_regressors());
    let mut targets = DMatrix::zeros(t_eff, k);
    for t in 0..t_eff {
        let cal = maxlag + t; // calendar row of the left-hand side
        let mut col = 0;
        design[(t, col)] = 1.0;
        col += 1;
        for lag in 1..=dims.domestic_lags {
            for c in 0..k {
                design[(t, col)] = own[(cal - lag, c)];
                col += 1;
            }
        }
        for lag in 1..=dims.foreign_lags {
            for c in 0..k {
                design[(t, col)] = avg[(cal - lag, c)];
                col += 1;
            }
        }
        for c in 0..ell {
            design[(t, col)] = national[(cal - 1, c)];
            col += 1;
        }
        for c in 0..k {
            targets[(t, c)] = own[(cal, c)];
        }
    }
    BlockDesign { design, targets }
}

/// Design matrix for the national equations: columns are
/// `[1 (only if with_intercept), national lags 1..P (ℓ each),
/// cross-region-average lags 1..Q (k each)]`.
pub fn national_design(
    data: &PanelDataset,
    dims: &ModelDims,
    with_intercept: bool,
) -> Result<BlockDesign> {
    data.check_dims(dims)?;
    let maxlag = dims.max_lag();
    if data.periods() <= maxlag {
        return Err(Error::config(format!(
            "{} periods are not enough for lag order {maxlag}",
            data.periods()
        )));
    }
    let cross = national_cross_averages(data.regions())?;
    let t_eff = dims.effective_periods();
    let k = dims.region_vars;
    let ell = dims.national_vars;
    let national = data.national();

    let m = dims.national_regressors() + usize::from(with_intercept);
    let mut design = DMatrix::zeros(t_eff, m);
    let mut targets = DMatrix::zeros(t_eff, ell);
    for t in 0..t_eff {
        let cal = maxlag + t;
        let mut col = 0;
        if with_intercept {
            design[(t, col)] = 1.0;
            col += 1;
        }
        for lag in 1..=dims.domestic_lags {
            for c in 0..ell {
                design[(t, col)] = national[(cal - lag, c)];
                col += 1;
            }
        }
        for lag in 1..=dims.foreign_lags {
            for c in 0..k {
                design[(t, col)] = cross[(cal - lag, c)];
                col += 1;
            }
        }
        for c in 0..ell {
            targets[(t, c)] = national[(cal, c)];
        }
    }
    Ok(BlockDesign { design, targets })
}
