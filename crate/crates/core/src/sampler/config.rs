use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sv::SvPrior;

/// Hyperparameters of every prior in the model. Defaults are the weakly
/// informative settings used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PriorConfig {
    /// Prior variance scale for the common mean μ ~ N(0, v0_scale·I).
    pub v0_scale: f64,
    /// Inverse-gamma shape for the hierarchy variances v_j.
    pub d0: f64,
    /// Inverse-gamma scale for the hierarchy variances v_j.
    pub d1: f64,
    /// Prior variance of every national coefficient.
    pub national_coef_var: f64,
    /// Prior variance of every factor loading.
    pub loading_var: f64,
    /// Prior variance of each volatility level φ.
    pub sv_mean_var: f64,
    /// Gamma shape for each volatility innovation variance σ².
    pub sv_sigma_shape: f64,
    /// Gamma rate for each volatility innovation variance σ².
    pub sv_sigma_rate: f64,
    /// Beta parameters of the persistence prior (ρ+1)/2 ~ Beta(a, b).
    pub sv_rho_a: f64,
    pub sv_rho_b: f64,
}

impl Default for PriorConfig {
    fn default() -> Self {
        PriorConfig {
            v0_scale: 10.0,
            d0: 0.01,
            d1: 0.01,
            national_coef_var: 10.0,
            loading_var: 100.0,
            sv_mean_var: 100.0,
            sv_sigma_shape: 0.5,
            sv_sigma_rate: 0.5,
            sv_rho_a: 25.0,
            sv_rho_b: 5.0,
        }
    }
}

impl PriorConfig {
    /// All validation problems, empty when the configuration is usable.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [
            ("v0_scale", self.v0_scale),
            ("d0", self.d0),
            ("d1", self.d1),
            ("national_coef_var", self.national_coef_var),
            ("loading_var", self.loading_var),
            ("sv_mean_var", self.sv_mean_var),
            ("sv_sigma_shape", self.sv_sigma_shape),
            ("sv_sigma_rate", self.sv_sigma_rate),
            ("sv_rho_a", self.sv_rho_a),
            ("sv_rho_b", self.sv_rho_b),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("prior.{name} must be strictly positive, got {v}"));
            }
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

    /// The volatility-process slice of this configuration.
    pub fn sv_prior(&self) -> SvPrior {
        SvPrior {
            level_var: self.sv_mean_var,
            sigma_shape: self.sv_sigma_shape,
            sigma_rate: self.sv_sigma_rate,
            rho_a: self.sv_rho_a,
            rho_b: self.sv_rho_b,
        }
    }
}

/// Chain-length and reproducibility settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplerConfig {
    pub total_iterations: usize,
    pub burn_in: usize,
    /// Keep every `thin`-th post-burn-in draw.
    pub thin: usize,
    pub seed: u64,
    /// Include an intercept in the national equations (off by default; the
    /// national block is specified without one).
    pub national_intercept: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            total_iterations: 10_000,
            burn_in: 5_000,
            thin: 1,
            seed: 0,
            national_intercept: false,
        }
    }
}

impl SamplerConfig {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.total_iterations == 0 {
            out.push("sampler.total_iterations must be positive".into());
        }
        if self.burn_in >= self.total_iterations {
            out.push(format!(
                "sampler.burn_in ({}) must be smaller than total_iterations ({})",
                self.burn_in, self.total_iterations
            ));
        }
        if self.thin == 0 {
            out.push("sampler.thin must be at least 1".into());
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

    /// Number of draws the chain will retain.
    pub fn retained_draws(&self) -> usize {
        let kept = self.total_iterations - self.burn_in;
        kept.div_ceil(self.thin)
    }
}
