use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::ModelDims;

/// Coefficients of one region's VARX block.
///
/// The equation for the region's k variables regresses on an intercept, P
/// lags of the region's own variables, Q lags of the weighted cross-region
/// averages, and the first lag of the national variables.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionCoefficients {
    /// k-vector intercept.
    pub intercept: DVector<f64>,
    /// P matrices, k×k, lag order ascending.
    pub domestic: Vec<DMatrix<f64>>,
    /// Q matrices, k×k, on the lagged cross-region averages.
    pub foreign: Vec<DMatrix<f64>>,
    /// k×ℓ matrix on the lagged national variables.
    pub national: DMatrix<f64>,
}

impl RegionCoefficients {
    pub fn zeros(dims: &ModelDims) -> Self {
        let k = dims.region_vars;
        RegionCoefficients {
            intercept: DVector::zeros(k),
            domestic: vec![DMatrix::zeros(k, k); dims.domestic_lags],
            foreign: vec![DMatrix::zeros(k, k); dims.foreign_lags],
            national: DMatrix::zeros(k, dims.national_vars),
        }
    }

    pub fn check_dims(&self, dims: &ModelDims) -> Result<()> {
        let k = dims.region_vars;
        let ok = self.intercept.len() == k
            && self.domestic.len() == dims.domestic_lags
            && self.foreign.len() == dims.foreign_lags
            && self.domestic.iter().all(|m| m.shape() == (k, k))
            && self.foreign.iter().all(|m| m.shape() == (k, k))
            && self.national.shape() == (k, dims.national_vars);
        if ok {
            Ok(())
        } else {
            Err(Error::config("region coefficients do not match dimensions"))
        }
    }

    /// Flatten to the stacked M-vector: blocks in the order (intercept,
    /// domestic lags, foreign lags, national), each block column-major.
    ///
    /// With this layout the coefficients of equation `r` occupy exactly the
    /// indices `{r + k*j : j = 0..M/k}`, with `j` enumerating the regressors
    /// in design order — which is what lets the hierarchy mean/variance be
    /// sliced per equation.
    pub fn pack(&self) -> DVector<f64> {
        let k = self.intercept.len();
        let m_total = k
            + self.domestic.iter().map(|m| m.len()).sum::<usize>()
            + self.foreign.iter().map(|m| m.len()).sum::<usize>()
            + self.national.len();
        let mut out = DVector::zeros(m_total);
        let mut pos = 0;
        out.rows_mut(0, k).copy_from(&self.intercept);
        pos += k;
        for block in self.domestic.iter().chain(&self.foreign).chain(std::iter::once(&self.national)) {
            out.rows_mut(pos, block.len())
                .copy_from_slice(block.as_slice());
            pos += block.len();
        }
        out
    }

    /// Inverse of [`Self::pack`].
    pub fn unpack(beta: &DVector<f64>, dims: &ModelDims) -> Result<Self> {
        if beta.len() != dims.region_coef_len() {
            return Err(Error::config(format!(
                "coefficient vector has length {}, expected {}",
                beta.len(),
                dims.region_coef_len()
            )));
        }
        let k = dims.region_vars;
        let ell = dims.national_vars;
        let mut pos = 0;
        let intercept = DVector::from_column_slice(&beta.as_slice()[0..k]);
        pos += k;
        let mut take = |rows: usize, cols: usize| {
            let m = DMatrix::from_column_slice(rows, cols, &beta.as_slice()[pos..pos + rows * cols]);
            pos += rows * cols;
            m
        };
        let domestic: Vec<_> = (0..dims.domestic_lags).map(|_| take(k, k)).collect();
        let foreign: Vec<_> = (0..dims.foreign_lags).map(|_| take(k, k)).collect();
        let national = take(k, ell);
        Ok(RegionCoefficients {
            intercept,
            domestic,
            foreign,
            national,
        })
    }

    /// Coefficients of equation `r` in design order:
    /// `[intercept_r, domestic lag blocks row r, foreign lag blocks row r,
    /// national row r]`.
    pub fn equation_row(&self, r: usize) -> DVector<f64> {
        let k = self.intercept.len();
        let m = 1 + (self.domestic.len() + self.foreign.len()) * k + self.national.ncols();
        let mut out = DVector::zeros(m);
        let mut pos = 0;
        out[pos] = self.intercept[r];
        pos += 1;
        for block in self.domestic.iter().chain(&self.foreign) {
            for c in 0..k {
                out[pos] = block[(r, c)];
                pos += 1;
            }
        }
        for c in 0..self.national.ncols() {
            out[pos] = self.national[(r, c)];
            pos += 1;
        }
        out
    }

    /// Overwrite equation `r` from a design-ordered coefficient vector.
    pub fn set_equation_row(&mut self, r: usize, row: &DVector<f64>) {
        let k = self.intercept.len();
        let mut pos = 0;
        self.intercept[r] = row[pos];
        pos += 1;
        for block in self.domestic.iter_mut().chain(self.foreign.iter_mut()) {
            for c in 0..k {
                block[(r, c)] = row[pos];
                pos += 1;
            }
        }
        for c in 0..self.national.ncols() {
            self.national[(r, c)] = row[pos];
            pos += 1;
        }
    }

    /// k×m matrix whose row `r` is [`Self::equation_row`]`(r)`; multiplying
    /// the design matrix by its transpose evaluates all k equations at once.
    pub fn coefficient_matrix(&self) -> DMatrix<f64> {
        let k = self.intercept.len();
        let m = 1 + (self.domestic.len() + self.foreign.len()) * k + self.national.ncols();
        let mut out = DMatrix::zeros(k, m);
        for r in 0..k {
            out.set_row(r, &self.equation_row(r).transpose());
        }
        out
    }

    /// Indices of equation `r`'s coefficients inside the packed vector, in
    /// design order. Used to slice the hierarchy mean and variances.
    pub fn equation_indices(dims: &ModelDims, r: usize) -> Vec<usize> {
        let k = dims.region_vars;
        (0..dims.region_regressors()).map(|j| r + k * j).collect()
    }
}

/// Coefficients of the national VAR block.
///
/// The printed model carries no intercept; an optional one can be enabled
/// explicitly and is `None` by default.
#[derive(Clone, Debug, PartialEq)]
pub struct NationalCoefficients {
    /// P matrices, ℓ×ℓ, on lagged national variables.
    pub domestic: Vec<DMatrix<f64>>,
    /// Q matrices, ℓ×k, on lagged cross-region averages.
    pub regional: Vec<DMatrix<f64>>,
    /// Optional intercept (off by default; not part of the printed model).
    pub intercept: Option<DVector<f64>>,
}

impl NationalCoefficients {
    pub fn zeros(dims: &ModelDims, with_intercept: bool) -> Self {
        let ell = dims.national_vars;
        NationalCoefficients {
            domestic: vec![DMatrix::zeros(ell, ell); dims.domestic_lags],
            regional: vec![DMatrix::zeros(ell, dims.region_vars); dims.foreign_lags],
            intercept: with_intercept.then(|| DVector::zeros(ell)),
        }
    }

    pub fn check_dims(&self, dims: &ModelDims) -> Result<()> {
        let ell = dims.national_vars;
        let ok = self.domestic.len() == dims.domestic_lags
            && self.regional.len() == dims.foreign_lags
            && self.domestic.iter().all(|m| m.shape() == (ell, ell))
            && self
                .regional
                .iter()
                .all(|m| m.shape() == (ell, dims.region_vars))
            && self.intercept.as_ref().is_none_or(|c| c.len() == ell);
        if ok {
            Ok(())
        } else {
            Err(Error::config("national coefficients do not match dimensions"))
        }
    }

    /// Number of regressors per national equation.
    pub fn regressors(&self, dims: &ModelDims) -> usize {
        dims.national_regressors() + usize::from(self.intercept.is_some())
    }

    /// Coefficients of national equation `r` in design order:
    /// `[intercept_r?, domestic lag blocks row r, regional-average blocks row r]`.
    pub fn equation_row(&self, r: usize) -> DVector<f64> {
        let mut vals = Vec::new();
        if let Some(c) = &self.intercept {
            vals.push(c[r]);
        }
        for block in self.domestic.iter().chain(&self.regional) {
            for c in 0..block.ncols() {
                vals.push(block[(r, c)]);
            }
        }
        DVector::from_vec(vals)
    }

    pub fn set_equation_row(&mut self, r: usize, row: &DVector<f64>) {
        let mut pos = 0;
        if let Some(c) = &mut self.intercept {
            c[r] = row[pos];
            pos += 1;
        }
        for block in self.domestic.iter_mut().chain(self.regional.iter_mut()) {
            for c in 0..block.ncols() {
                block[(r, c)] = row[pos];
                pos += 1;
            }
        }
    }

    /// ℓ×m matrix of equation rows, design-ordered.
    pub fn coefficient_matrix(&self, dims: &ModelDims) -> DMatrix<f64> {
        let ell = dims.national_vars;
        let m = self.regressors(dims);
        let mut out = DMatrix::zeros(ell, m);
        for r in 0..ell {
            out.set_row(r, &self.equation_row(r).transpose());
        }
        out
    }
}

/// Cross-region pooling distribution: region coefficient vectors are modeled
/// as draws from `N(mean, diag(variances))`.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyParams {
    pub mean: DVector<f64>,
    pub variances: DVector<f64>,
}

impl HierarchyParams {
    pub fn new(mean: DVector<f64>, variances: DVector<f64>) -> Result<Self> {
        if mean.len() != variances.len() {
            return Err(Error::config(format!(
                "hierarchy mean has length {} but variances {}",
                mean.len(),
                variances.len()
            )));
        }
        if variances.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::config("hierarchy variances must all be positive"));
        }
        Ok(HierarchyParams { mean, variances })
    }

    /// Neutral starting point: zero mean, unit variances.
    pub fn neutral(m: usize) -> Self {
        HierarchyParams {
            mean: DVector::zeros(m),
            variances: DVector::from_element(m, 1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dims(k: usize, ell: usize, p: usize, q: usize) -> ModelDims {
        ModelDims::new(3, k, ell, p, q, 0, 50).unwrap()
    }

    fn arb_coeffs(k: usize, ell: usize, p: usize, q: usize) -> impl Strategy<Value = RegionCoefficients> {
        let m = k * (1 + (p + q) * k + ell);
        proptest::collection::vec(-2.0..2.0f64, m).prop_map(move |vals| {
            let d = dims(k, ell, p, q);
            RegionCoefficients::unpack(&DVector::from_vec(vals), &d).unwrap()
        })
    }

    #[test]
    fn pack_layout_is_column_major_by_block() {
        let d = dims(2, 1, 1, 1);
        let mut c = RegionCoefficients::zeros(&d);
        c.intercept[1] = 1.0;
        c.domestic[0][(0, 1)] = 2.0; // column-major index within block: 1*2 + 0
        c.foreign[0][(1, 0)] = 3.0;
        c.national[(0, 0)] = 4.0;
        let beta = c.pack();
        assert_eq!(beta[1], 1.0);
        assert_eq!(beta[2 + 2], 2.0); // intercept block (2) + col 1 row 0
        assert_eq!(beta[2 + 4 + 1], 3.0); // + domestic block (4), col 0 row 1
        assert_eq!(beta[2 + 4 + 4], 4.0);
    }

    #[test]
    fn equation_indices_stride_by_variable_count() {
        let d = dims(3, 2, 2, 1);
        let idx = RegionCoefficients::equation_indices(&d, 1);
        assert_eq!(idx.len(), d.region_regressors());
        assert!(idx.iter().all(|i| i % 3 == 1));
        // The indexed slots of the packed vector are exactly the equation row.
        let mut c = RegionCoefficients::zeros(&d);
        for r in 0..3 {
            let row = DVector::from_fn(d.region_regressors(), |j, _| (r * 100 + j) as f64);
            c.set_equation_row(r, &row);
        }
        let beta = c.pack();
        for (j, &i) in idx.iter().enumerate() {
            assert_eq!(beta[i], (100 + j) as f64);
        }
    }

    #[test]
    fn national_equation_rows_roundtrip_with_intercept() {
        let d = dims(2, 3, 2, 1);
        for with_int in [false, true] {
            let mut c = NationalCoefficients::zeros(&d, with_int);
            let m = c.regressors(&d);
            for r in 0..3 {
                let row = DVector::from_fn(m, |j, _| (r * 10 + j) as f64 + 0.5);
                c.set_equation_row(r, &row);
                assert_eq!(c.equation_row(r), row);
            }
            c.check_dims(&d).unwrap();
        }
    }

    #[test]
    fn hierarchy_rejects_nonpositive_variances() {
        let m = DVector::zeros(3);
        assert!(HierarchyParams::new(m.clone(), DVector::from_vec(vec![1.0, 0.0, 1.0])).is_err());
        assert!(HierarchyParams::new(m, DVector::from_vec(vec![1.0, 2.0, f64::NAN])).is_err());
    }

    proptest! {
        /// Round-trip pack/unpack is the identity, and equation rows agree
        /// with the strided slice of the packed vector.
        #[test]
        fn pack_unpack_identity(c in arb_coeffs(2, 2, 2, 1)) {
            let d = dims(2, 2, 2, 1);
            let beta = c.pack();
            prop_assert_eq!(beta.len(), d.region_coef_len());
            let back = RegionCoefficients::unpack(&beta, &d).unwrap();
            prop_assert_eq!(&back, &c);
            for r in 0..2 {
                let row = c.equation_row(r);
                for (j, &i) in RegionCoefficients::equation_indices(&d, r).iter().enumerate() {
                    prop_assert_eq!(beta[i], row[j]);
                }
            }
        }
    }
}
