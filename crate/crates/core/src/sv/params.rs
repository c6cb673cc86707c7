use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngExt};
use rand_distr::{Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::weighted_regression_posterior;
use crate::sv::ffbs::ffbs_draw;
use crate::sv::mixture::{linearized_observation, sample_indicators, MIX_MEAN, MIX_VAR};

/// Parameters of one AR(1) log-variance process
/// `h_t = φ + ρ (h_{t−1} − φ) + σ ξ_t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvParams {
    /// Unconditional mean of the log variance (φ).
    pub level: f64,
    /// AR(1) persistence (ρ), inside the unit interval.
    pub persistence: f64,
    /// Innovation variance (σ²), positive.
    pub innovation_var: f64,
}

impl SvParams {
    pub fn validate(&self) -> Result<()> {
        if !self.level.is_finite() {
            return Err(Error::config("volatility level must be finite"));
        }
        if !(self.persistence.abs() < 1.0) {
            return Err(Error::config(format!(
                "volatility persistence must lie in (-1, 1), got {}",
                self.persistence
            )));
        }
        if !(self.innovation_var > 0.0 && self.innovation_var.is_finite()) {
            return Err(Error::config(format!(
                "volatility innovation variance must be positive, got {}",
                self.innovation_var
            )));
        }
        Ok(())
    }
}

/// Prior for one volatility process: φ ~ N(0, level_var),
/// σ² ~ Gamma(sigma_shape, rate sigma_rate), (ρ+1)/2 ~ Beta(rho_a, rho_b).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvPrior {
    pub level_var: f64,
    pub sigma_shape: f64,
    pub sigma_rate: f64,
    pub rho_a: f64,
    pub rho_b: f64,
}

impl Default for SvPrior {
    fn default() -> Self {
        SvPrior {
            level_var: 100.0,
            sigma_shape: 0.5,
            sigma_rate: 0.5,
            rho_a: 25.0,
            rho_b: 5.0,
        }
    }
}

impl SvPrior {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("level_var", self.level_var),
            ("sigma_shape", self.sigma_shape),
            ("sigma_rate", self.sigma_rate),
            ("rho_a", self.rho_a),
            ("rho_b", self.rho_b),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!(
                    "volatility prior {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// The interweaving move re-expresses the Gamma prior on σ² as a normal
    /// prior on signed σ, which is exact only at shape 1/2.
    pub(crate) fn interweaving_applies(&self) -> bool {
        (self.sigma_shape - 0.5).abs() < 1e-12
    }
}

/// Floor for σ² after the interweaving redraw.
const SIGMA2_FLOOR: f64 = 1e-12;

/// Conjugate update of the level φ given the path.
fn update_level<R: Rng>(path: &[f64], rho: f64, sigma2: f64, prior: &SvPrior, rng: &mut R) -> f64 {
    let init_precision = (1.0 - rho * rho) / sigma2;
    let step_precision = (1.0 - rho) * (1.0 - rho) / sigma2;
    let precision =
        1.0 / prior.level_var + init_precision + (path.len() - 1) as f64 * step_precision;
    let step_sum: f64 = path.windows(2).map(|w| w[1] - rho * w[0]).sum();
    let rhs = path[0] * init_precision + (1.0 - rho) / sigma2 * step_sum;
    let z: f64 = rng.sample(StandardNormal);
    rhs / precision + z / precision.sqrt()
}

/// Sum of squared scaled innovations, including the stationary initial term.
fn innovation_sse(path: &[f64], phi: f64, rho: f64) -> f64 {
    let mut sse = (1.0 - rho * rho) * (path[0] - phi) * (path[0] - phi);
    for w in path.windows(2) {
        let e = w[1] - phi - rho * (w[0] - phi);
        sse += e * e;
    }
    sse
}

/// Independence-MH update of σ² under the Gamma prior. The proposal is the
/// inverse-gamma conditional that a flat-ish power prior would give, so the
/// acceptance ratio reduces to the Gamma prior density ratio.
fn update_innovation_var<R: Rng>(
    path: &[f64],
    phi: f64,
    rho: f64,
    current: f64,
    prior: &SvPrior,
    rng: &mut R,
) -> f64 {
    let sse = innovation_sse(path, phi, rho);
    let shape = path.len() as f64 / 2.0 - 1.0;
    if !(shape > 0.0) || !(sse > 0.0) {
        return current;
    }
    let gamma = Gamma::new(shape, 1.0).expect("positive shape");
    let g: f64 = rng.sample(gamma);
    if g <= 0.0 {
        return current;
    }
    let proposal = (sse / 2.0) / g;
    let log_prior =
        |s2: f64| (prior.sigma_shape - 1.0) * s2.ln() - prior.sigma_rate * s2;
    let delta = log_prior(proposal) - log_prior(current);
    let u: f64 = rng.random();
    if u.ln() < delta {
        proposal
    } else {
        current
    }
}

/// Independence-MH update of ρ. The proposal is the lag-regression normal
/// restricted to (−1, 1); what remains in the acceptance ratio is the Beta
/// prior and the stationary initial-condition factor.
fn update_persistence<R: Rng>(
    path: &[f64],
    phi: f64,
    sigma2: f64,
    current: f64,
    prior: &SvPrior,
    rng: &mut R,
) -> f64 {
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for w in path.windows(2) {
        let (x, y) = (w[0] - phi, w[1] - phi);
        sxx += x * x;
        sxy += x * y;
    }
    if !(sxx > 0.0) {
        return current;
    }
    let center = sxy / sxx;
    let sd = (sigma2 / sxx).sqrt();
    let mut proposal = None;
    for _ in 0..100 {
        let z: f64 = rng.sample(StandardNormal);
        let candidate = center + sd * z;
        if candidate.abs() < 1.0 {
            proposal = Some(candidate);
            break;
        }
    }
    let Some(proposal) = proposal else {
        return current;
    };
    let init_dev = path[0] - phi;
    let log_target = |r: f64| {
        (prior.rho_a - 1.0) * ((1.0 + r) / 2.0).ln()
            + (prior.rho_b - 1.0) * ((1.0 - r) / 2.0).ln()
            + 0.5 * (1.0 - r * r).ln()
            - (1.0 - r * r) * init_dev * init_dev / (2.0 * sigma2)
    };
    let delta = log_target(proposal) - log_target(current);
    let u: f64 = rng.random();
    if u.ln() < delta {
        proposal
    } else {
        current
    }
}

/// Interweaving move: re-express the path in its standardized (ancillary)
/// form, redraw (φ, signed σ) from the heteroscedastic observation-equation
/// regression, and map the path back. Requires the shape-1/2 prior so the
/// Gamma prior on σ² is exactly a normal prior on signed σ.
fn interweave_level_scale<R: Rng>(
    obs_adjusted: &[f64],
    obs_vars: &[f64],
    path: &mut [f64],
    params: &mut SvParams,
    prior: &SvPrior,
    rng: &mut R,
) -> Result<()> {
    let t = path.len();
    let sigma = params.innovation_var.sqrt();
    let standardized: Vec<f64> = path.iter().map(|h| (h - params.level) / sigma).collect();
    let design = DMatrix::from_fn(t, 2, |r, c| if c == 0 { 1.0 } else { standardized[r] });
    let response = DVector::from_column_slice(obs_adjusted);
    let noise_log_var = DVector::from_iterator(t, obs_vars.iter().map(|v| v.ln()));
    let prior_mean = DVector::zeros(2);
    let prior_var =
        DVector::from_column_slice(&[prior.level_var, 1.0 / (2.0 * prior.sigma_rate)]);
    let posterior = weighted_regression_posterior(
        &design,
        &response,
        &noise_log_var,
        &prior_mean,
        &prior_var,
        "volatility interweaving",
    )?;
    let draw = posterior.sample(rng);
    let (new_level, signed_sigma) = (draw[0], draw[1]);
    params.level = new_level;
    params.innovation_var = (signed_sigma * signed_sigma).max(SIGMA2_FLOOR);
    for (h, s) in path.iter_mut().zip(&standardized) {
        *h = new_level + signed_sigma * s;
    }
    Ok(())
}

/// One full volatility pass for a single series: auxiliary-mixture
/// indicators, path draw by forward filtering / backward sampling, then the
/// (φ, σ², ρ) updates with an interweaving move for level and scale.
/// Returns the new log-variance path and parameter draw.
pub fn sample_volatility_path<R: Rng>(
    series: &[f64],
    prev_path: &[f64],
    params: &SvParams,
    prior: &SvPrior,
    rng: &mut R,
) -> Result<(Vec<f64>, SvParams)> {
    let t = series.len();
    if t < 8 {
        return Err(Error::config(format!(
            "volatility sampling needs at least 8 observations, got {t}"
        )));
    }
    if prev_path.len() != t {
        return Err(Error::config(format!(
            "previous path has {} entries for {t} observations",
            prev_path.len()
        )));
    }
    params.validate()?;
    prior.validate()?;
    if let Some(bad) = series.iter().position(|v| !v.is_finite()) {
        return Err(Error::numerical(format!(
            "volatility input not finite at period {bad}"
        )));
    }

    let obs: Vec<f64> = series.iter().map(|&v| linearized_observation(v)).collect();
    let indicators = sample_indicators(&obs, prev_path, rng);
    let obs_adjusted: Vec<f64> = obs
        .iter()
        .zip(&indicators)
        .map(|(&o, &s)| o - MIX_MEAN[s])
        .collect();
    let obs_vars: Vec<f64> = indicators.iter().map(|&s| MIX_VAR[s]).collect();

    let mut path = ffbs_draw(&obs_adjusted, &obs_vars, params, rng)?;
    let mut new = *params;
    new.level = update_level(&path, new.persistence, new.innovation_var, prior, rng);
    new.innovation_var = update_innovation_var(
        &path,
        new.level,
        new.persistence,
        new.innovation_var,
        prior,
        rng,
    );
    new.persistence =
        update_persistence(&path, new.level, new.innovation_var, new.persistence, prior, rng);
    if prior.interweaving_applies() {
        interweave_level_scale(&obs_adjusted, &obs_vars, &mut path, &mut new, prior, rng)?;
    }

    new.validate()
        .map_err(|e| Error::numerical(format!("volatility update left bad parameters: {e}")))?;
    if path.iter().any(|h| !h.is_finite()) {
        return Err(Error::numerical("volatility path became non-finite"));
    }
    Ok((path, new))
}
