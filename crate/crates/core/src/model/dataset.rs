use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelDims;

/// One applied transformation, kept for auditability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub series: String,
    pub directive: String,
}

/// Fully transformed observations ready for estimation.
///
/// Region series are stored one matrix per region (rows = time, columns =
/// region variables, in a fixed shared order); national series in a single
/// T×ℓ matrix. The first national column is the series that gets shocked in
/// the structural analysis, so its position is part of the data contract.
#[derive(Clone, Debug, PartialEq)]
pub struct PanelDataset {
    region_series: Vec<DMatrix<f64>>,
    national_series: DMatrix<f64>,
    pub region_names: Vec<String>,
    pub region_var_names: Vec<String>,
    pub national_var_names: Vec<String>,
    pub transform_log: Vec<TransformRecord>,
}

impl PanelDataset {
    pub fn new(
        region_series: Vec<DMatrix<f64>>,
        national_series: DMatrix<f64>,
        region_names: Vec<String>,
        region_var_names: Vec<String>,
        national_var_names: Vec<String>,
    ) -> Result<Self> {
        if region_series.is_empty() {
            return Err(Error::config("dataset needs at least one region"));
        }
        if region_series.len() != region_names.len() {
            return Err(Error::config(format!(
                "{} region series but {} region names",
                region_series.len(),
                region_names.len()
            )));
        }
        let t = national_series.nrows();
        let k = region_series[0].ncols();
        if k != region_var_names.len() {
            return Err(Error::config(format!(
                "region series have {k} columns but {} variable names given",
                region_var_names.len()
            )));
        }
        if national_series.ncols() != national_var_names.len() {
            return Err(Error::config(format!(
                "national series has {} columns but {} variable names given",
                national_series.ncols(),
                national_var_names.len()
            )));
        }
        if national_series.ncols() == 0 {
            return Err(Error::config("dataset needs at least one national series"));
        }
        for (name, series) in region_names.iter().zip(&region_series) {
            if series.nrows() != t || series.ncols() != k {
                return Err(Error::config(format!(
                    "region '{name}' series is {}x{}, expected {t}x{k}",
                    series.nrows(),
                    series.ncols()
                )));
            }
            if series.iter().any(|x| !x.is_finite()) {
                return Err(Error::config(format!(
                    "region '{name}' series contains non-finite values"
                )));
            }
        }
        if national_series.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("national series contains non-finite values"));
        }
        Ok(PanelDataset {
            region_series,
            national_series,
            region_names,
            region_var_names,
            national_var_names,
            transform_log: Vec::new(),
        })
    }

    pub fn periods(&self) -> usize {
        self.national_series.nrows()
    }

    pub fn region_count(&self) -> usize {
        self.region_series.len()
    }

    pub fn region_var_count(&self) -> usize {
        self.region_series[0].ncols()
    }

    pub fn national_var_count(&self) -> usize {
        self.national_series.ncols()
    }

    /// T×k observations for one region.
    pub fn region(&self, i: usize) -> &DMatrix<f64> {
        &self.region_series[i]
    }

    pub fn regions(&self) -> &[DMatrix<f64>] {
        &self.region_series
    }

    /// T×ℓ national observations.
    pub fn national(&self) -> &DMatrix<f64> {
        &self.national_series
    }

    /// Check that the dataset matches a dimension specification.
    pub fn check_dims(&self, dims: &ModelDims) -> Result<()> {
        let mut problems = Vec::new();
        if self.region_count() != dims.regions {
            problems.push(format!(
                "dataset has {} regions, dims specify {}",
                self.region_count(),
                dims.regions
            ));
        }
        if self.region_var_count() != dims.region_vars {
            problems.push(format!(
                "dataset has {} region variables, dims specify {}",
                self.region_var_count(),
                dims.region_vars
            ));
        }
        if self.national_var_count() != dims.national_vars {
            problems.push(format!(
                "dataset has {} national variables, dims specify {}",
                self.national_var_count(),
                dims.national_vars
            ));
        }
        if self.periods() != dims.periods {
            problems.push(format!(
                "dataset has {} periods, dims specify {}",
                self.periods(),
                dims.periods
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::ConfigList(problems))
        }
    }

    /// Dimensions implied by the data, completed with the given lag/factor
    /// orders.
    pub fn dims(&self, domestic_lags: usize, foreign_lags: usize, factors: usize) -> Result<ModelDims> {
        ModelDims::new(
            self.region_count(),
            self.region_var_count(),
            self.national_var_count(),
            domestic_lags,
            foreign_lags,
            factors,
            self.periods(),
        )
    }
}
