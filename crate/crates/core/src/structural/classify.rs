use crate::error::{Error, Result};
use crate::structural::summary::quantile;

/// Sign-and-size buckets for a region's peak response.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResponseClass {
    Negative,
    SlightlyNegative,
    Insignificant,
    SlightlyPositive,
    Positive,
}

impl ResponseClass {
    /// Human-readable label, used verbatim in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            ResponseClass::Negative => "Negative",
            ResponseClass::SlightlyNegative => "Slightly negative",
            ResponseClass::Insignificant => "Insignificant",
            ResponseClass::SlightlyPositive => "Slightly positive",
            ResponseClass::Positive => "Positive",
        }
    }
}

impl std::fmt::Display for ResponseClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Posterior band of one response series over horizons `0..=H`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandSeries {
    pub q16: Vec<f64>,
    pub q50: Vec<f64>,
    pub q84: Vec<f64>,
}

impl BandSeries {
    fn validate(&self, index: usize) -> Result<()> {
        let n = self.q50.len();
        if n == 0 {
            return Err(Error::config(format!("series {index} has no horizons")));
        }
        if self.q16.len() != n || self.q84.len() != n {
            return Err(Error::config(format!(
                "series {index}: band lengths differ ({}/{}/{})",
                self.q16.len(),
                n,
                self.q84.len()
            )));
        }
        Ok(())
    }
}

/// Peak response of one series and the class it falls into.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeakClassification {
    /// Median response of largest absolute magnitude over horizons.
    pub peak_value: f64,
    /// Horizon of the peak; ties resolve to the earliest horizon.
    pub peak_horizon: usize,
    pub class: ResponseClass,
}

/// Locate the peak of the median response: the horizon where |q50| is
/// largest, the earliest one on ties. (A signed-maximum reading of "peak"
/// would miss deep troughs; the absolute-magnitude reading is used here.)
fn peak_of(series: &BandSeries) -> (usize, f64) {
    let mut best = 0usize;
    for (h, v) in series.q50.iter().enumerate().skip(1) {
        if v.abs() > series.q50[best].abs() {
            best = h;
        }
    }
    (best, series.q50[best])
}

/// Classify every region's peak response.
///
/// A region whose 16–84 band straddles zero at its own peak horizon is
/// `Insignificant`. The rest split by sign and then by size against the
/// empirical thresholds of the cross-region peak distribution: peaks at or
/// below its `lower_frac` quantile are `Negative`, positive peaks at or
/// above its `1 − upper_frac` quantile are `Positive`, and everything in
/// between is the matching "slightly" class. Thresholds come from all
/// regions' peaks — significant or not — so the buckets describe the whole
/// cross-section.
pub fn peak_and_classify(
    series: &[BandSeries],
    lower_frac: f64,
    upper_frac: f64,
) -> Result<Vec<PeakClassification>> {
    if series.is_empty() {
        return Err(Error::config("classification needs at least one series"));
    }
    for (frac, name) in [(lower_frac, "lower_frac"), (upper_frac, "upper_frac")] {
        if !(0.0..=1.0).contains(&frac) || !frac.is_finite() {
            return Err(Error::config(format!("{name} must lie in [0, 1], got {frac}")));
        }
    }
    for (i, s) in series.iter().enumerate() {
        s.validate(i)?;
    }

    let peaks: Vec<(usize, f64)> = series.iter().map(peak_of).collect();
    let mut sorted: Vec<f64> = peaks.iter().map(|&(_, v)| v).collect();
    sorted.sort_unstable_by(f64::total_cmp);
    let lower_threshold = quantile(&sorted, lower_frac);
    let upper_threshold = quantile(&sorted, 1.0 - upper_frac);

    Ok(series
        .iter()
        .zip(&peaks)
        .map(|(s, &(h, peak))| {
            let insignificant = s.q16[h] <= 0.0 && s.q84[h] >= 0.0;
            let class = if insignificant {
                ResponseClass::Insignificant
            } else if peak < 0.0 {
                if peak <= lower_threshold {
                    ResponseClass::Negative
                } else {
                    ResponseClass::SlightlyNegative
                }
            } else if peak >= upper_threshold {
                ResponseClass::Positive
            } else {
                ResponseClass::SlightlyPositive
            };
            PeakClassification {
                peak_value: peak,
                peak_horizon: h,
                class,
            }
        })
        .collect())
}
