use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PanelDataset, TransformRecord};
use crate::pipeline::period::parse_period;
use crate::pipeline::seasonal::deseasonalize;

/// Per-series transformation directive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directive {
    None,
    Log,
    FirstDifference,
}

impl Directive {
    fn label(self) -> &'static str {
        match self {
            Directive::None => "none",
            Directive::Log => "log",
            Directive::FirstDifference => "first_difference",
        }
    }
}

/// Transformation plan for one variable (shared by all regions for region
/// variables).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTransform {
    pub directive: Directive,
    #[serde(default)]
    pub deseasonalize: bool,
}

impl SeriesTransform {
    pub fn none() -> Self {
        SeriesTransform {
            directive: Directive::None,
            deseasonalize: false,
        }
    }
}

/// Transformation plan for the whole panel, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub region_vars: Vec<SeriesTransform>,
    pub national_vars: Vec<SeriesTransform>,
}

impl TransformSpec {
    /// Pass-through plan: no directive, no seasonal adjustment.
    pub fn identity(region_vars: usize, national_vars: usize) -> Self {
        TransformSpec {
            region_vars: vec![SeriesTransform::none(); region_vars],
            national_vars: vec![SeriesTransform::none(); national_vars],
        }
    }
}

/// Untransformed panel observations with their period labels.
#[derive(Clone, Debug, PartialEq)]
pub struct RawPanel {
    pub region_series: Vec<DMatrix<f64>>,
    pub national_series: DMatrix<f64>,
    pub region_names: Vec<String>,
    pub region_var_names: Vec<String>,
    pub national_var_names: Vec<String>,
    /// Ascending contiguous quarter labels ("1985Q1"), one per row.
    pub periods: Vec<String>,
}

impl RawPanel {
    /// Quarter-of-year (0–3) of the first observation.
    pub fn start_phase(&self) -> Result<usize> {
        let first = self
            .periods
            .first()
            .ok_or_else(|| Error::config("panel has no periods"))?;
        let (_, quarter) = parse_period(first)?;
        Ok(quarter as usize - 1)
    }
}

/// Apply the transformation plan: seasonal adjustment first, then the log or
/// difference directive, then one global trim so every series covers the
/// same periods. Every applied step is logged on the output dataset.
pub fn apply_transforms(raw: &RawPanel, spec: &TransformSpec) -> Result<PanelDataset> {
    let k = raw.region_var_names.len();
    let ell = raw.national_var_names.len();
    if spec.region_vars.len() != k {
        return Err(Error::config(format!(
            "transform plan covers {} region variables, panel has {k}",
            spec.region_vars.len()
        )));
    }
    if spec.national_vars.len() != ell {
        return Err(Error::config(format!(
            "transform plan covers {} national variables, panel has {ell}",
            spec.national_vars.len()
        )));
    }
    let t_raw = raw.national_series.nrows();
    if raw.periods.len() != t_raw {
        return Err(Error::config(format!(
            "{} period labels for {t_raw} rows",
            raw.periods.len()
        )));
    }
    let phase = raw.start_phase()?;

    let any_difference = spec
        .region_vars
        .iter()
        .chain(&spec.national_vars)
        .any(|s| s.directive == Directive::FirstDifference);
    let drop = usize::from(any_difference);
    if t_raw <= drop {
        return Err(Error::config("panel too short to difference"));
    }
    let t_out = t_raw - drop;

    let mut log = Vec::new();
    let transform_column = |column: &[f64],
                            plan: &SeriesTransform,
                            series_name: &str|
     -> Result<Vec<f64>> {
        let mut values = if plan.deseasonalize {
            deseasonalize(column, phase).map_err(|e| {
                Error::config(format!("series {series_name}: {e}"))
            })?
        } else {
            column.to_vec()
        };
        match plan.directive {
            Directive::None => {}
            Directive::Log => {
                for (t, v) in values.iter_mut().enumerate() {
                    if *v <= 0.0 {
                        return Err(Error::config(format!(
                            "series {series_name}: log requires positive values; got {v} at {}",
                            raw.periods[t]
                        )));
                    }
                    *v = v.ln();
                }
            }
            Directive::FirstDifference => {
                values = values.windows(2).map(|w| w[1] - w[0]).collect();
            }
        }
        // Trim to the common support: differenced series already lost the
        // first observation, the rest drop it here.
        let skip = values.len() - t_out;
        Ok(values[skip..].to_vec())
    };

    for (c, plan) in spec.region_vars.iter().enumerate() {
        record_plan(&mut log, &raw.region_var_names[c], plan);
    }
    for (c, plan) in spec.national_vars.iter().enumerate() {
        record_plan(&mut log, &raw.national_var_names[c], plan);
    }
    if drop == 1 {
        log.push(TransformRecord {
            series: "(panel)".into(),
            directive: "trim_first_observation".into(),
        });
    }

    let mut region_out = Vec::with_capacity(raw.region_series.len());
    for (i, series) in raw.region_series.iter().enumerate() {
        if series.shape() != (t_raw, k) {
            return Err(Error::config(format!(
                "region {} series is {}x{}, expected {t_raw}x{k}",
                raw.region_names[i],
                series.nrows(),
                series.ncols()
            )));
        }
        let mut out = DMatrix::zeros(t_out, k);
        for c in 0..k {
            let column: Vec<f64> = series.column(c).iter().copied().collect();
            let name = format!("{} ({})", raw.region_var_names[c], raw.region_names[i]);
            let transformed = transform_column(&column, &spec.region_vars[c], &name)?;
            for (t, v) in transformed.iter().enumerate() {
                out[(t, c)] = *v;
            }
        }
        region_out.push(out);
    }
    let mut national_out = DMatrix::zeros(t_out, ell);
    for c in 0..ell {
        let column: Vec<f64> = raw.national_series.column(c).iter().copied().collect();
        let transformed =
            transform_column(&column, &spec.national_vars[c], &raw.national_var_names[c])?;
        for (t, v) in transformed.iter().enumerate() {
            national_out[(t, c)] = *v;
        }
    }

    let mut data = PanelDataset::new(
        region_out,
        national_out,
        raw.region_names.clone(),
        raw.region_var_names.clone(),
        raw.national_var_names.clone(),
    )?;
    data.transform_log = log;
    Ok(data)
}

fn record_plan(log: &mut Vec<TransformRecord>, series: &str, plan: &SeriesTransform) {
    if plan.deseasonalize {
        log.push(TransformRecord {
            series: series.into(),
            directive: "deseasonalize".into(),
        });
    }
    log.push(TransformRecord {
        series: series.into(),
        directive: plan.directive.label().into(),
    });
}
