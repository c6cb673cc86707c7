use nalgebra::DMatrix;

use crate::error::Result;
use crate::model::{
    national_design, region_design, ModelDims, NationalCoefficients, PanelDataset,
    RegionCoefficients, WeightMatrix,
};

/// Reduced-form residuals of one region's equations over the effective
/// sample: `(T − max_lag) × k`, row `t` belonging to calendar index
/// `max_lag + t`.
pub fn region_residuals(
    data: &PanelDataset,
    w: &WeightMatrix,
    coeffs: &RegionCoefficients,
    dims: &ModelDims,
    region: usize,
) -> Result<DMatrix<f64>> {
    coeffs.check_dims(dims)?;
    let block = region_design(data, w, dims, region)?;
    Ok(&block.targets - &block.design * coeffs.coefficient_matrix().transpose())
}

/// Reduced-form residuals of the national equations, `(T − max_lag) × ℓ`.
pub fn national_residuals(
    data: &PanelDataset,
    coeffs: &NationalCoefficients,
    dims: &ModelDims,
) -> Result<DMatrix<f64>> {
    coeffs.check_dims(dims)?;
    let block = national_design(data, dims, coeffs.intercept.is_some())?;
    Ok(&block.targets - &block.design * coeffs.coefficient_matrix(dims).transpose())
}
