use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension bookkeeping for the stacked multi-region system.
///
/// All other modules take their shape information from here; the derived
/// quantities ([`Self::region_coef_len`], [`Self::shock_dim`], …) are computed
/// on demand so they can never fall out of sync with the base fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDims {
    /// Number of regions (N ≥ 1).
    pub regions: usize,
    /// Variables per region (k ≥ 1).
    pub region_vars: usize,
    /// National variables (ℓ ≥ 1); slot 0 is the shocked series.
    pub national_vars: usize,
    /// Domestic lag order (P ≥ 1).
    pub domestic_lags: usize,
    /// Cross-region (foreign-average) lag order (Q ≥ 1).
    pub foreign_lags: usize,
    /// Number of common factors (F ≥ 0).
    pub factors: usize,
    /// Time points in the estimation sample (T > max(P, Q)).
    pub periods: usize,
}

impl ModelDims {
    pub fn new(
        regions: usize,
        region_vars: usize,
        national_vars: usize,
        domestic_lags: usize,
        foreign_lags: usize,
        factors: usize,
        periods: usize,
    ) -> Result<Self> {
        let dims = ModelDims {
            regions,
            region_vars,
            national_vars,
            domestic_lags,
            foreign_lags,
            factors,
            periods,
        };
        dims.validate()?;
        Ok(dims)
    }

    /// All structural problems with this dimension set, empty when valid.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.regions == 0 {
            out.push("regions must be at least 1".to_string());
        }
        if self.region_vars == 0 {
            out.push("region_vars must be at least 1".to_string());
        }
        if self.national_vars == 0 {
            out.push("national_vars must be at least 1".to_string());
        }
        if self.domestic_lags == 0 {
            out.push("domestic_lags must be at least 1".to_string());
        }
        if self.foreign_lags == 0 {
            out.push("foreign_lags must be at least 1".to_string());
        }
        if self.periods <= self.max_lag() {
            out.push(format!(
                "periods ({}) must exceed the maximum lag ({})",
                self.periods,
                self.max_lag()
            ));
        }
        if self.factors > self.shock_dim() {
            out.push(format!(
                "factors ({}) cannot exceed the shock dimension ({})",
                self.factors,
                self.shock_dim()
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::ConfigList(problems))
        }
    }

    /// max(P, Q): observations consumed as initial conditions.
    pub fn max_lag(&self) -> usize {
        self.domestic_lags.max(self.foreign_lags)
    }

    /// Usable sample length after the lag window, T − max(P, Q).
    pub fn effective_periods(&self) -> usize {
        self.periods.saturating_sub(self.max_lag())
    }

    /// Regressors per region equation: 1 + P·k + Q·k + ℓ.
    pub fn region_regressors(&self) -> usize {
        1 + (self.domestic_lags + self.foreign_lags) * self.region_vars + self.national_vars
    }

    /// Stacked coefficient count per region, M = k·(1 + P·k + Q·k + ℓ).
    pub fn region_coef_len(&self) -> usize {
        self.region_vars * self.region_regressors()
    }

    /// Regressors per national equation without intercept: P·ℓ + Q·k.
    pub fn national_regressors(&self) -> usize {
        self.domestic_lags * self.national_vars + self.foreign_lags * self.region_vars
    }

    /// Dimension of the stacked shock vector, L = k·N + ℓ.
    pub fn shock_dim(&self) -> usize {
        self.region_vars * self.regions + self.national_vars
    }

    /// Row offset of region `i`'s block inside the stacked state vector
    /// (the national block comes first).
    pub fn region_offset(&self, region: usize) -> usize {
        self.national_vars + region * self.region_vars
    }
}
