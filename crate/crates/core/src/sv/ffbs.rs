use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::standard_normal_vector;
use crate::sv::params::SvParams;

/// Draw a latent AR(1) path by forward filtering / backward sampling in the
/// linear-Gaussian state space
///
/// ```text
/// obs_t = h_t + e_t,   e_t ~ N(0, obs_var_t)
/// h_t   = φ + ρ (h_{t−1} − φ) + σ ξ_t,   h_1 ~ N(φ, σ²/(1−ρ²))
/// ```
///
/// `z` supplies the standard-normal innovations of the backward pass (one
/// per period), so a zero vector yields the smoothed mean path exactly.
pub fn ffbs_draw_with(
    obs: &[f64],
    obs_var: &[f64],
    params: &SvParams,
    z: &[f64],
) -> Result<Vec<f64>> {
    let t_len = obs.len();
    if t_len == 0 {
        return Err(Error::config("empty observation sequence"));
    }
    if obs_var.len() != t_len || z.len() != t_len {
        return Err(Error::config(format!(
            "observation/variance/innovation lengths differ: {t_len}/{}/{}",
            obs_var.len(),
            z.len()
        )));
    }
    params.validate()?;
    for (t, (&o, &v)) in obs.iter().zip(obs_var).enumerate() {
        if !o.is_finite() || !v.is_finite() || v <= 0.0 {
            return Err(Error::numerical(format!(
                "bad filter input at period {t}: obs {o}, variance {v}"
            )));
        }
    }
    let (phi, rho, sigma2) = (params.level, params.persistence, params.innovation_var);

    let mut a_pred = vec![0.0; t_len];
    let mut p_pred = vec![0.0; t_len];
    let mut a_filt = vec![0.0; t_len];
    let mut p_filt = vec![0.0; t_len];
    for t in 0..t_len {
        if t == 0 {
            a_pred[t] = phi;
            p_pred[t] = sigma2 / (1.0 - rho * rho);
        } else {
            a_pred[t] = phi + rho * (a_filt[t - 1] - phi);
            p_pred[t] = rho * rho * p_filt[t - 1] + sigma2;
        }
        let gain = p_pred[t] / (p_pred[t] + obs_var[t]);
        a_filt[t] = a_pred[t] + gain * (obs[t] - a_pred[t]);
        p_filt[t] = (1.0 - gain) * p_pred[t];
    }

    let mut path = vec![0.0; t_len];
    path[t_len - 1] = a_filt[t_len - 1] + p_filt[t_len - 1].max(0.0).sqrt() * z[t_len - 1];
    for t in (0..t_len - 1).rev() {
        let carry = rho * p_filt[t] / p_pred[t + 1];
        let mean = a_filt[t] + carry * (path[t + 1] - a_pred[t + 1]);
        let var = (p_filt[t] - carry * rho * p_filt[t]).max(0.0);
        path[t] = mean + var.sqrt() * z[t];
    }
    Ok(path)
}

/// [`ffbs_draw_with`] with innovations drawn from `rng`.
pub fn ffbs_draw<R: Rng>(
    obs: &[f64],
    obs_var: &[f64],
    params: &SvParams,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let z = standard_normal_vector(rng, obs.len());
    ffbs_draw_with(obs, obs_var, params, z.as_slice())
}
