use rand::{Rng, RngExt};

/// Offset added inside the log before linearization, guarding zero
/// residuals: the sampler works with `log(ε² + OFFSET)`.
pub const LOG_OFFSET: f64 = 1e-10;

/// Ten-component Gaussian mixture approximating the log χ²₁ distribution,
/// used to linearize the squared-observation equation of the volatility
/// model. Component means are relative to the log-variance level.
pub const MIX_PROB: [f64; 10] = [
    0.00609, 0.04775, 0.13057, 0.20674, 0.22715, 0.18842, 0.12047, 0.05591, 0.01575, 0.00115,
];
pub const MIX_MEAN: [f64; 10] = [
    1.92677, 1.34744, 0.73504, 0.02266, -0.85173, -1.97278, -3.46788, -5.55246, -8.68384,
    -14.65000,
];
pub const MIX_VAR: [f64; 10] = [
    0.11265, 0.17788, 0.26768, 0.40611, 0.62699, 0.98583, 1.57469, 2.54498, 4.16591, 7.33342,
];

/// Linearized observation: `log(value² + offset)`, computed so that huge
/// finite inputs (whose square would overflow) still map to a finite number.
pub fn linearized_observation(value: f64) -> f64 {
    let squared = value * value;
    if squared.is_finite() {
        (squared + LOG_OFFSET).ln()
    } else {
        2.0 * value.abs().ln()
    }
}

/// Posterior probabilities of each mixture component for one observation,
/// given the current log-variance level: `p_i · N(obs | level + m_i, v²_i)`
/// normalized.
pub fn component_posterior(obs: f64, level: f64) -> [f64; 10] {
    let mut weights = [0.0; 10];
    // Work with log weights and subtract the max for stability.
    let mut max = f64::NEG_INFINITY;
    for i in 0..10 {
        let resid = obs - level - MIX_MEAN[i];
        weights[i] = MIX_PROB[i].ln() - 0.5 * MIX_VAR[i].ln() - 0.5 * resid * resid / MIX_VAR[i];
        max = max.max(weights[i]);
    }
    let mut total = 0.0;
    for w in weights.iter_mut() {
        *w = (*w - max).exp();
        total += *w;
    }
    for w in weights.iter_mut() {
        *w /= total;
    }
    weights
}

/// Sample one mixture indicator per observation, conditional on the current
/// log-variance path.
pub fn sample_indicators<R: Rng>(obs: &[f64], path: &[f64], rng: &mut R) -> Vec<usize> {
    debug_assert_eq!(obs.len(), path.len());
    obs.iter()
        .zip(path)
        .map(|(&o, &level)| {
            let probs = component_posterior(o, level);
            let u: f64 = rng.random();
            let mut cum = 0.0;
            for (i, p) in probs.iter().enumerate() {
                cum += p;
                if u < cum {
                    return i;
                }
            }
            9
        })
        .collect()
}
