use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::WeightMatrix;

/// Weighted cross-sectional averages of the other regions' variables:
/// `out[i][t, ·] = Σ_j w_ij · regions[j][t, ·]`.
///
/// With a single region the weight matrix is degenerate and the averages are
/// identically zero (callers should surface that to users as a warning).
pub fn foreign_averages(regions: &[DMatrix<f64>], w: &WeightMatrix) -> Result<Vec<DMatrix<f64>>> {
    let n = regions.len();
    if n == 0 {
        return Err(Error::config("foreign averages need at least one region"));
    }
    if w.regions() != n {
        return Err(Error::config(format!(
            "weight matrix is for {} regions but {} series given",
            w.regions(),
            n
        )));
    }
    let (t, k) = regions[0].shape();
    for (j, series) in regions.iter().enumerate() {
        if series.shape() != (t, k) {
            return Err(Error::config(format!(
                "region {j} series is {}x{}, expected {t}x{k}",
                series.nrows(),
                series.ncols()
            )));
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut avg = DMatrix::zeros(t, k);
        for j in 0..n {
            let wij = w.get(i, j);
            if wij != 0.0 {
                avg += &regions[j] * wij;
            }
        }
        out.push(avg);
    }
    Ok(out)
}

/// Simple arithmetic average of the region variables across regions:
/// `out[t, ·] = (1/N) Σ_i regions[i][t, ·]`.
pub fn national_cross_averages(regions: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let n = regions.len();
    if n == 0 {
        return Err(Error::config("cross averages need at least one region"));
    }
    let (t, k) = regions[0].shape();
    let mut out = DMatrix::zeros(t, k);
    for (j, series) in regions.iter().enumerate() {
        if series.shape() != (t, k) {
            return Err(Error::config(format!(
                "region {j} series is {}x{}, expected {t}x{k}",
                series.nrows(),
                series.ncols()
            )));
        }
        out += series;
    }
    out.scale_mut(1.0 / n as f64);
    Ok(out)
}
