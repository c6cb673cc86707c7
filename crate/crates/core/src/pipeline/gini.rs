use crate::error::{Error, Result};

/// One survey household: raw income, household size, sampling weight, and
/// the period (survey year) it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct SurveyRecord {
    pub income: f64,
    pub household_size: u32,
    pub weight: f64,
    pub period: String,
}

/// Square-root-scale equivalized income: negative incomes are clamped to
/// zero, then divided by the square root of household size.
pub fn equivalize(records: &[SurveyRecord]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(records.len());
    for (idx, rec) in records.iter().enumerate() {
        if rec.household_size == 0 {
            return Err(Error::config(format!(
                "record {idx} (period {}): household size must be at least 1",
                rec.period
            )));
        }
        if !rec.income.is_finite() || !rec.weight.is_finite() || rec.weight < 0.0 {
            return Err(Error::config(format!(
                "record {idx} (period {}): non-finite income or invalid weight",
                rec.period
            )));
        }
        out.push(rec.income.max(0.0) / (rec.household_size as f64).sqrt());
    }
    Ok(out)
}

/// Weighted Gini coefficient: half the relative mean absolute difference,
/// `G = Σ_i Σ_j w_i w_j |x_i − x_j| / (2 (Σw)² x̄_w)`, computed with the
/// sorted O(n log n) identity. No small-sample correction is applied.
pub fn weighted_gini(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(Error::config(format!(
            "{} values but {} weights",
            values.len(),
            weights.len()
        )));
    }
    if values.is_empty() {
        return Err(Error::config("empty sample"));
    }
    for (i, (&x, &w)) in values.iter().zip(weights).enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::config(format!("value {i} is {x}; need finite non-negative")));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::config(format!("weight {i} is {w}; need finite non-negative")));
        }
    }
    let total_weight: f64 = weights.iter().sum();
    if total_weight <= 0.0 {
        return Err(Error::config("weights sum to zero"));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    // With values ascending, Σ_i<j w_i w_j (x_j − x_i) telescopes into one
    // pass over cumulative weights and cumulative weighted values.
    let mut cum_weight = 0.0;
    let mut cum_value = 0.0;
    let mut numer = 0.0;
    for &j in &order {
        let (x, w) = (values[j], weights[j]);
        numer += w * (x * cum_weight - cum_value);
        cum_weight += w;
        cum_value += w * x;
    }
    if cum_value <= 0.0 {
        return Err(Error::config(
            "weighted values sum to zero; coefficient undefined",
        ));
    }
    Ok(numer / (total_weight * cum_value))
}

/// Equivalize and compute one Gini coefficient per period, sorted by period
/// label. Every period must carry some positive weight.
pub fn gini_by_period(records: &[SurveyRecord]) -> Result<Vec<(String, f64)>> {
    let incomes = equivalize(records)?;
    let mut periods: Vec<String> = records.iter().map(|r| r.period.clone()).collect();
    periods.sort();
    periods.dedup();
    let mut out = Vec::with_capacity(periods.len());
    for period in periods {
        let mut values = Vec::new();
        let mut weights = Vec::new();
        for (rec, &inc) in records.iter().zip(&incomes) {
            if rec.period == period {
                values.push(inc);
                weights.push(rec.weight);
            }
        }
        let g = weighted_gini(&values, &weights)
            .map_err(|e| Error::config(format!("period {period}: {e}")))?;
        out.push((period, g));
    }
    Ok(out)
}
