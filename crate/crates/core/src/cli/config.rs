use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelDims;
use crate::pipeline::TransformSpec;
use crate::sampler::{PriorConfig, SamplerConfig};
use crate::structural::DEFAULT_HORIZON;

/// Input file locations. Every path is optional: commands fall back to the
/// artifacts a previous command left in the output directory (`panel.csv`,
/// `weights.csv`, `posterior.bin`), so a `simulate → estimate → irf` chain
/// needs no paths at all.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InputPaths {
    /// Long-format panel CSV (`region,variable,period,value`; empty region
    /// field = national series).
    pub panel: Option<PathBuf>,
    /// Row-stochastic connectivity CSV; mutually exclusive with `centroids`.
    pub weights: Option<PathBuf>,
    /// Region centroid CSV, turned into inverse-distance weights.
    pub centroids: Option<PathBuf>,
    /// Survey microdata CSV (`income,size,weight,year`) for `gini`.
    pub survey: Option<PathBuf>,
    /// Per-region covariate CSV (`region` plus numeric columns) for `regress`.
    pub covariates: Option<PathBuf>,
    /// Posterior store; defaults to `posterior.bin` in the output directory.
    pub posterior: Option<PathBuf>,
}

/// Options for the structural commands (`irf`, `fevd`, `classify`,
/// `regress`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StructuralOptions {
    /// Largest response horizon (responses cover `0..=horizon`).
    pub horizon: usize,
    /// Identify the covariance at this effective-sample date instead of the
    /// time average.
    pub covariance_date: Option<usize>,
    /// Rescale the shock so the shocked variable moves by exactly this much
    /// on impact (default: one standard error).
    pub normalize_impact: Option<f64>,
    /// Lower tail fraction for the peak classification thresholds.
    pub lower_frac: f64,
    /// Upper tail fraction for the peak classification thresholds.
    pub upper_frac: f64,
    /// Region-variable index classified and regressed on (0 = the first
    /// variable of every region's block).
    pub classify_variable: usize,
    /// Horizon whose median response feeds the covariate regression.
    pub regress_horizon: usize,
}

impl Default for StructuralOptions {
    fn default() -> Self {
        StructuralOptions {
            horizon: DEFAULT_HORIZON,
            covariance_date: None,
            normalize_impact: None,
            lower_frac: 0.2,
            upper_frac: 0.2,
            classify_variable: 0,
            regress_horizon: 4,
        }
    }
}

/// One configuration file drives every command. Unknown keys are rejected
/// at parse time; value problems are collected and reported together.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Model shape. `periods` is the panel length `simulate` generates;
    /// `estimate` replaces it with the actual data length.
    pub dims: ModelDims,
    pub prior: PriorConfig,
    pub sampler: SamplerConfig,
    pub structural: StructuralOptions,
    pub paths: InputPaths,
    /// Optional per-variable transformation plan applied by `estimate`.
    pub transforms: Option<TransformSpec>,
    /// Accept unexpected CSV columns instead of rejecting them.
    pub permissive_csv: bool,
    /// First period label for generated panels ("2000Q1").
    pub start_period: String,
    /// Directory all artifacts are written to.
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dims: ModelDims {
                regions: 5,
                region_vars: 2,
                national_vars: 2,
                domestic_lags: 1,
                foreign_lags: 1,
                factors: 1,
                periods: 120,
            },
            prior: PriorConfig::default(),
            sampler: SamplerConfig::default(),
            structural: StructuralOptions::default(),
            paths: InputPaths::default(),
            transforms: None,
            permissive_csv: false,
            start_period: "2000Q1".to_string(),
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    /// Parse and validate a JSON configuration file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    /// Every value-level problem with this configuration, empty when valid.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(self.dims.problems().into_iter().map(|p| format!("dims: {p}")));
        out.extend(self.prior.problems());
        out.extend(self.sampler.problems());

        let s = &self.structural;
        if s.horizon == 0 {
            out.push("structural.horizon must be at least 1".to_string());
        }
        for (value, name) in [(s.lower_frac, "lower_frac"), (s.upper_frac, "upper_frac")] {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                out.push(format!("structural.{name} must lie in [0, 1], got {value}"));
            }
        }
        if let Some(size) = s.normalize_impact {
            if !(size.is_finite() && size > 0.0) {
                out.push(format!(
                    "structural.normalize_impact must be positive and finite, got {size}"
                ));
            }
        }
        if s.classify_variable >= self.dims.region_vars {
            out.push(format!(
                "structural.classify_variable ({}) out of range for {} region variables",
                s.classify_variable, self.dims.region_vars
            ));
        }
        if s.regress_horizon > s.horizon {
            out.push(format!(
                "structural.regress_horizon ({}) exceeds structural.horizon ({})",
                s.regress_horizon, s.horizon
            ));
        }
        if self.paths.weights.is_some() && self.paths.centroids.is_some() {
            out.push("paths.weights and paths.centroids are mutually exclusive".to_string());
        }
        if crate::pipeline::parse_period(&self.start_period).is_err() {
            out.push(format!(
                "start_period {:?} is not a quarter label like \"2000Q1\"",
                self.start_period
            ));
        }
        if self.output_dir.as_os_str().is_empty() {
            out.push("output_dir must not be empty".to_string());
        }
        out
    }

    /// Reject the configuration if any problem exists, reporting all of them.
    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::ConfigList(problems))
        }
    }

    /// Resolve an input path: explicit setting first, otherwise the named
    /// artifact in the output directory.
    pub fn input_or_artifact(&self, explicit: &Option<PathBuf>, artifact: &str) -> PathBuf {
        explicit
            .clone()
            .unwrap_or_else(|| self.output_dir.join(artifact))
    }
}
