use crate::error::{Error, Result};

/// Quarterly series produced by interpolating annual observations.
#[derive(Clone, Debug, PartialEq)]
pub struct SplineResult {
    /// One value per quarter, Q1 of the first year through Q4 of the last.
    pub values: Vec<f64>,
    pub first_year: i32,
    /// Set when fewer than three annual points forced a linear fallback.
    pub linear_fallback: bool,
}

impl SplineResult {
    /// Period labels ("1985Q1", …) aligned with `values`.
    pub fn period_labels(&self) -> Vec<String> {
        (0..self.values.len())
            .map(|q| format!("{}Q{}", self.first_year + (q / 4) as i32, q % 4 + 1))
            .collect()
    }
}

/// Interpolate annual observations to quarterly frequency with a natural
/// cubic spline. Knots sit at Q2 of each year (the survey reference
/// quarter); the curve is evaluated at every quarter from Q1 of the first
/// year to Q4 of the last, extended linearly with the boundary slope outside
/// the knot range. Fewer than three points fall back to a straight line,
/// reported through [`SplineResult::linear_fallback`].
pub fn annual_to_quarterly_spline(annual: &[(i32, f64)]) -> Result<SplineResult> {
    if annual.len() < 2 {
        return Err(Error::config(format!(
            "need at least two annual points, got {}",
            annual.len()
        )));
    }
    for window in annual.windows(2) {
        if window[1].0 <= window[0].0 {
            return Err(Error::config(format!(
                "annual points must have strictly increasing years; saw {} then {}",
                window[0].0, window[1].0
            )));
        }
    }
    for &(year, value) in annual {
        if !value.is_finite() {
            return Err(Error::config(format!("value for year {year} is not finite")));
        }
    }

    let first_year = annual[0].0;
    let last_year = annual[annual.len() - 1].0;
    let quarters = 4 * (last_year - first_year + 1) as usize;
    // Knot abscissa: quarter index of Q2 within the output grid.
    let xs: Vec<f64> = annual
        .iter()
        .map(|&(year, _)| (4 * (year - first_year) + 1) as f64)
        .collect();
    let ys: Vec<f64> = annual.iter().map(|&(_, y)| y).collect();

    let eval: Box<dyn Fn(f64) -> f64> = if annual.len() < 3 {
        let slope = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        let (x0, y0) = (xs[0], ys[0]);
        Box::new(move |x| y0 + slope * (x - x0))
    } else {
        let second = natural_spline_second_derivatives(&xs, &ys);
        Box::new(move |x| evaluate_spline(&xs, &ys, &second, x))
    };

    let values: Vec<f64> = (0..quarters).map(|q| eval(q as f64)).collect();
    Ok(SplineResult {
        values,
        first_year,
        linear_fallback: annual.len() < 3,
    })
}

/// Second derivatives of the natural cubic spline through `(xs, ys)`,
/// obtained from the standard tridiagonal system via the Thomas algorithm.
/// The boundary conditions pin the end second derivatives to zero.
fn natural_spline_second_derivatives(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let m = n - 2; // interior unknowns
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        let h_left = xs[i + 1] - xs[i];
        let h_right = xs[i + 2] - xs[i + 1];
        sub[i] = h_left / 6.0;
        diag[i] = (xs[i + 2] - xs[i]) / 3.0;
        sup[i] = h_right / 6.0;
        rhs[i] = (ys[i + 2] - ys[i + 1]) / h_right - (ys[i + 1] - ys[i]) / h_left;
    }
    // Forward sweep.
    for i in 1..m {
        let factor = sub[i] / diag[i - 1];
        diag[i] -= factor * sup[i - 1];
        rhs[i] -= factor * rhs[i - 1];
    }
    // Back substitution.
    let mut interior = vec![0.0; m];
    interior[m - 1] = rhs[m - 1] / diag[m - 1];
    for i in (0..m - 1).rev() {
        interior[i] = (rhs[i] - sup[i] * interior[i + 1]) / diag[i];
    }
    let mut second = vec![0.0; n];
    second[1..=m].copy_from_slice(&interior);
    second
}

fn evaluate_spline(xs: &[f64], ys: &[f64], second: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        // Linear continuation with the left boundary slope.
        let h = xs[1] - xs[0];
        let slope = (ys[1] - ys[0]) / h - h * second[1] / 6.0;
        return ys[0] + slope * (x - xs[0]);
    }
    if x >= xs[n - 1] {
        let h = xs[n - 1] - xs[n - 2];
        let slope = (ys[n - 1] - ys[n - 2]) / h + h * second[n - 2] / 6.0;
        return ys[n - 1] + slope * (x - xs[n - 1]);
    }
    // partition_point returns the first knot strictly beyond x.
    let hi = xs.partition_point(|&k| k <= x).min(n - 1);
    let lo = hi - 1;
    let h = xs[hi] - xs[lo];
    let a = (xs[hi] - x) / h;
    let b = (x - xs[lo]) / h;
    a * ys[lo]
        + b * ys[hi]
        + ((a * a * a - a) * second[lo] + (b * b * b - b) * second[hi]) * h * h / 6.0
}
