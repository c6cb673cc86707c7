use crate::error::{Error, Result};

/// Remove quarter-of-year fixed effects from a quarterly series. `phase` is
/// the quarter-of-year (0–3, Q1 = 0) of the first observation, so series may
/// start mid-year. Equivalent to regressing on four quarterly indicators and
/// keeping residual plus overall mean; the sample mean is preserved exactly
/// and the operation is idempotent.
pub fn deseasonalize(series: &[f64], phase: usize) -> Result<Vec<f64>> {
    if phase > 3 {
        return Err(Error::config(format!("phase must be 0..=3, got {phase}")));
    }
    if series.len() < 8 {
        return Err(Error::config(format!(
            "need at least 8 quarters to estimate seasonal effects, got {}",
            series.len()
        )));
    }
    if let Some(idx) = series.iter().position(|v| !v.is_finite()) {
        return Err(Error::config(format!(
            "observation {idx} is not finite"
        )));
    }
    let mut sums = [0.0f64; 4];
    let mut counts = [0usize; 4];
    for (t, &v) in series.iter().enumerate() {
        let q = (phase + t) % 4;
        sums[q] += v;
        counts[q] += 1;
    }
    if counts.iter().any(|&c| c == 0) {
        // Unreachable with ≥ 8 observations, but keep the guard local.
        return Err(Error::config("a quarter-of-year has no observations"));
    }
    let overall = series.iter().sum::<f64>() / series.len() as f64;
    let quarter_mean: Vec<f64> = (0..4).map(|q| sums[q] / counts[q] as f64).collect();
    Ok(series
        .iter()
        .enumerate()
        .map(|(t, &v)| v - quarter_mean[(phase + t) % 4] + overall)
        .collect())
}
