use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Empirical quantile by linear interpolation between order statistics:
/// the `p`-quantile of `n` sorted values sits at fractional index
/// `(n−1)·p` and interpolates linearly between its two neighbors. This is
/// the rule spreadsheet `PERCENTILE` and NumPy's default use, pinned here
/// so summaries are bit-reproducible.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    assert!((0.0..=1.0).contains(&p), "quantile fraction {p} outside [0, 1]");
    let pos = (sorted.len() - 1) as f64 * p;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Pointwise 16/50/84 posterior bands over a grid of draws.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryGrid {
    pub q16: DMatrix<f64>,
    pub q50: DMatrix<f64>,
    pub q84: DMatrix<f64>,
}

impl SummaryGrid {
    pub fn nrows(&self) -> usize {
        self.q50.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.q50.ncols()
    }
}

/// Summarize equally-shaped draw matrices cell by cell into 16th, 50th and
/// 84th percentiles. Needs at least two draws — a single draw has no
/// dispersion to summarize.
pub fn summarize_cells(draws: &[DMatrix<f64>]) -> Result<SummaryGrid> {
    if draws.len() < 2 {
        return Err(Error::config(format!(
            "posterior summaries need at least two draws, got {}",
            draws.len()
        )));
    }
    let (rows, cols) = draws[0].shape();
    for (i, d) in draws.iter().enumerate() {
        if d.shape() != (rows, cols) {
            return Err(Error::config(format!(
                "draw {i} has shape {}x{}, expected {rows}x{cols}",
                d.nrows(),
                d.ncols()
            )));
        }
    }
    let mut q16 = DMatrix::zeros(rows, cols);
    let mut q50 = DMatrix::zeros(rows, cols);
    let mut q84 = DMatrix::zeros(rows, cols);
    let mut cell = vec![0.0; draws.len()];
    for r in 0..rows {
        for c in 0..cols {
            for (slot, d) in cell.iter_mut().zip(draws.iter()) {
                *slot = d[(r, c)];
            }
            cell.sort_unstable_by(f64::total_cmp);
            q16[(r, c)] = quantile(&cell, 0.16);
            q50[(r, c)] = quantile(&cell, 0.50);
            q84[(r, c)] = quantile(&cell, 0.84);
        }
    }
    Ok(SummaryGrid { q16, q50, q84 })
}
