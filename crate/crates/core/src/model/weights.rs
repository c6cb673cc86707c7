use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Tolerance for the row-stochasticity check.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Row-stochastic connectivity matrix with a zero diagonal.
///
/// Row `i` holds the weights with which region `i` averages the other
/// regions' variables. In the single-region case no off-diagonal mass exists;
/// the 1×1 zero matrix is accepted as a documented degenerate convention and
/// cross-region averages are identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix(DMatrix<f64>);

impl WeightMatrix {
    pub fn new(w: DMatrix<f64>) -> Result<Self> {
        let n = w.nrows();
        if n == 0 || w.ncols() != n {
            return Err(Error::config(format!(
                "weight matrix must be square and nonempty, got {}x{}",
                w.nrows(),
                w.ncols()
            )));
        }
        for i in 0..n {
            if w[(i, i)] != 0.0 {
                return Err(Error::config(format!(
                    "weight matrix diagonal must be exactly zero, entry ({i},{i}) is {}",
                    w[(i, i)]
                )));
            }
            let mut sum = 0.0;
            for j in 0..n {
                let x = w[(i, j)];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::config(format!(
                        "weight matrix entries must be finite and nonnegative, entry ({i},{j}) is {x}"
                    )));
                }
                sum += x;
            }
            let degenerate_single = n == 1 && sum == 0.0;
            if !degenerate_single && (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::config(format!(
                    "weight matrix row {i} sums to {sum}, expected 1 within {ROW_SUM_TOL:e}"
                )));
            }
        }
        Ok(WeightMatrix(w))
    }

    /// Equal weighting of all other regions: off-diagonal entries 1/(N−1).
    /// For N = 1 this is the degenerate zero matrix.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("weight matrix needs at least one region"));
        }
        if n == 1 {
            return WeightMatrix::new(DMatrix::zeros(1, 1));
        }
        let off = 1.0 / (n as f64 - 1.0);
        let w = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { off });
        WeightMatrix::new(w)
    }

    pub fn regions(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }
}
