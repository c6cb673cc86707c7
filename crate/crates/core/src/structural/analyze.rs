use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{assemble_shock_covariance, stack_global_system, ModelDims, RegionCoefficients};
use crate::sampler::{PosteriorDraw, PosteriorStore};
use crate::structural::cholesky::{identify_cholesky, impact_columns, ShockDesign};
use crate::structural::classify::{peak_and_classify, BandSeries, PeakClassification};
use crate::structural::fevd::fevd;
use crate::structural::irf::{impulse_response, EXPLOSIVE_RADIUS};
use crate::structural::summary::{summarize_cells, SummaryGrid};

/// Default response horizon: a five-year window at quarterly frequency.
pub const DEFAULT_HORIZON: usize = 20;

/// Fixed number of posterior draws each parallel work unit processes. A
/// constant independent of the thread count keeps every floating-point
/// reduction order identical across runs, so multi-threaded analyses stay
/// byte-reproducible.
const DRAW_CHUNK: usize = 64;

/// Which shock covariance to identify from a draw's volatility paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovarianceWindow {
    /// Average the variances (not the log variances) over the estimation
    /// sample, giving one representative covariance per draw.
    TimeAverage,
    /// Use the covariance at one date, indexed into the effective sample
    /// (period 0 is the first row after the lag presample).
    AtDate(usize),
}

/// Options for turning a posterior store into structural summaries.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuralSettings {
    /// Shock ordering and normalization; `None` keeps the stacked order
    /// (uncertainty variable first) and shocks position 0.
    pub design: Option<ShockDesign>,
    /// Largest response horizon; responses cover `0..=horizon`.
    pub horizon: usize,
    pub window: CovarianceWindow,
}

impl Default for StructuralSettings {
    fn default() -> Self {
        StructuralSettings {
            design: None,
            horizon: DEFAULT_HORIZON,
            window: CovarianceWindow::TimeAverage,
        }
    }
}

/// Posterior summaries of the structural quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuralAnalysis {
    /// The design actually used (after defaulting).
    pub design: ShockDesign,
    pub horizon: usize,
    /// Bands of the responses to the designed shock, `(H+1) × L`.
    pub irf: SummaryGrid,
    /// Bands of the designed shock's forecast-error-variance share, same shape.
    pub fevd: SummaryGrid,
    /// Posterior-mean share of every shock: `fevd_mean[s][(h, v)]`. Shares
    /// sum to one across shocks cell by cell (each draw decomposes to one,
    /// and the mean preserves that).
    pub fevd_mean: Vec<DMatrix<f64>>,
    /// Human-readable annotations (explosive draws, zero-variance cells).
    pub warnings: Vec<String>,
}

/// ln of the time-averaged variance implied by a log-volatility path, per
/// column: the average is taken on the variance scale, where it is exact
/// for the covariance assembly, then mapped back to logs.
fn averaged_log_variance(log_paths: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_fn(log_paths.ncols(), |j, _| {
        let mean: f64 =
            log_paths.column(j).iter().map(|h| h.exp()).sum::<f64>() / log_paths.nrows() as f64;
        mean.ln()
    })
}

/// Shock covariance of one draw under the chosen window.
fn draw_covariance(
    draw: &PosteriorDraw<'_>,
    window: CovarianceWindow,
) -> Result<DMatrix<f64>> {
    let loadings = draw.loadings();
    let factor_paths = draw.log_vol_factors();
    let idio_paths = draw.log_vol_idio();
    let (factor_log, idio_log) = match window {
        CovarianceWindow::TimeAverage => (
            averaged_log_variance(&factor_paths),
            averaged_log_variance(&idio_paths),
        ),
        CovarianceWindow::AtDate(t) => (
            factor_paths.row(t).transpose(),
            idio_paths.row(t).transpose(),
        ),
    };
    assemble_shock_covariance(&loadings, &factor_log, &idio_log)
}

struct ChunkOutput {
    irfs: Vec<DMatrix<f64>>,
    shares: Vec<DMatrix<f64>>,
    mean_partials: Vec<DMatrix<f64>>,
    explosive_draws: usize,
    zero_cell_draws: usize,
}

/// Identify, propagate and summarize every draw of a posterior store.
///
/// Per draw: stack the global system from the sampled coefficients,
/// assemble the shock covariance under the configured window, factor it in
/// the design's ordering, and compute impulse responses to the designed
/// shock plus the full variance decomposition. Draws are processed in
/// parallel; summaries and means reduce in fixed draw order.
///
/// When the design requests a fixed impact size the rescaling applies to
/// the responses only — variance shares always use the raw one-standard-
/// error columns, since scaling a single shock would break the
/// decomposition.
pub fn analyze_store(
    store: &PosteriorStore,
    settings: &StructuralSettings,
) -> Result<StructuralAnalysis> {
    let dims = store.dims().clone();
    let l = dims.shock_dim();
    let design = settings
        .design
        .clone()
        .unwrap_or_else(|| ShockDesign::uncertainty_first(l));
    design.validate(l)?;
    let n = store.draw_count();
    if n < 2 {
        return Err(Error::config(format!(
            "structural analysis needs at least two posterior draws, got {n}"
        )));
    }
    if let CovarianceWindow::AtDate(t) = settings.window {
        if t >= dims.effective_periods() {
            return Err(Error::config(format!(
                "covariance date {t} outside the effective sample 0..{}",
                dims.effective_periods()
            )));
        }
    }
    let w = store.weights()?;
    let horizon = settings.horizon;

    let chunk_count = n.div_ceil(DRAW_CHUNK);
    let chunks: Vec<ChunkOutput> = (0..chunk_count)
        .into_par_iter()
        .map(|c| -> Result<ChunkOutput> {
            let lo = c * DRAW_CHUNK;
            let hi = (lo + DRAW_CHUNK).min(n);
            let mut out = ChunkOutput {
                irfs: Vec::with_capacity(hi - lo),
                shares: Vec::with_capacity(hi - lo),
                mean_partials: vec![DMatrix::zeros(horizon + 1, l); l],
                explosive_draws: 0,
                zero_cell_draws: 0,
            };
            for d in lo..hi {
                (|| -> Result<()> {
                    let draw = store.draw(d)?;
                    let regions: Vec<RegionCoefficients> = (0..dims.regions)
                        .map(|i| draw.region_coeffs(i))
                        .collect::<Result<_>>()?;
                    let national = draw.national_coeffs();
                    let system = stack_global_system(&w, &regions, &national, &dims)?;
                    let theta = draw_covariance(&draw, settings.window)?;
                    let chol = identify_cholesky(&theta, &design.ordering)?;
                    let impacts = impact_columns(&chol, &design.ordering);

                    let mut impact = impacts.column(design.shock_index).into_owned();
                    if let Some(size) = design.normalize_impact {
                        impact *= size / chol[(design.shock_index, design.shock_index)];
                    }
                    let irf_out = impulse_response(&system, &impact, horizon)?;
                    if irf_out.warning.is_some() {
                        out.explosive_draws += 1;
                    }
                    let fevd_out = fevd(&system, &impacts, horizon)?;
                    if fevd_out.warning.is_some() {
                        out.zero_cell_draws += 1;
                    }
                    let mut shares = fevd_out.shares;
                    for (partial, share) in out.mean_partials.iter_mut().zip(&shares) {
                        *partial += share;
                    }
                    out.shares.push(shares.swap_remove(design.shock_index));
                    out.irfs.push(irf_out.responses);
                    Ok(())
                })()
                .map_err(|e| e.with_prefix(&format!("posterior draw {d}")))?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut irfs = Vec::with_capacity(n);
    let mut shares = Vec::with_capacity(n);
    let mut fevd_mean = vec![DMatrix::zeros(horizon + 1, l); l];
    let mut explosive_draws = 0usize;
    let mut zero_cell_draws = 0usize;
    for chunk in chunks {
        irfs.extend(chunk.irfs);
        shares.extend(chunk.shares);
        for (total, partial) in fevd_mean.iter_mut().zip(&chunk.mean_partials) {
            *total += partial;
        }
        explosive_draws += chunk.explosive_draws;
        zero_cell_draws += chunk.zero_cell_draws;
    }
    for m in fevd_mean.iter_mut() {
        *m /= n as f64;
    }

    let mut warnings = Vec::new();
    if explosive_draws > 0 {
        warnings.push(format!(
            "{explosive_draws} of {n} draws have explosive dynamics \
             (companion spectral radius above {EXPLOSIVE_RADIUS})"
        ));
    }
    if zero_cell_draws > 0 {
        warnings.push(format!(
            "{zero_cell_draws} of {n} draws contained zero-variance forecast cells"
        ));
    }

    Ok(StructuralAnalysis {
        design,
        horizon,
        irf: summarize_cells(&irfs)?,
        fevd: summarize_cells(&shares)?,
        fevd_mean,
        warnings,
    })
}

/// Band of one region variable's response across all regions, sliced out of
/// an analysis grid: entry `i` covers stacked column `ℓ + i·k + variable`.
pub fn region_band_series(
    analysis: &StructuralAnalysis,
    dims: &ModelDims,
    variable: usize,
) -> Result<Vec<BandSeries>> {
    if variable >= dims.region_vars {
        return Err(Error::config(format!(
            "region variable index {variable} out of range for {} variables",
            dims.region_vars
        )));
    }
    Ok((0..dims.regions)
        .map(|i| {
            let col = dims.region_offset(i) + variable;
            BandSeries {
                q16: analysis.irf.q16.column(col).iter().copied().collect(),
                q50: analysis.irf.q50.column(col).iter().copied().collect(),
                q84: analysis.irf.q84.column(col).iter().copied().collect(),
            }
        })
        .collect())
}

/// Peak-and-classify one region variable's responses across regions.
pub fn classify_regions(
    analysis: &StructuralAnalysis,
    dims: &ModelDims,
    variable: usize,
    lower_frac: f64,
    upper_frac: f64,
) -> Result<Vec<PeakClassification>> {
    let series = region_band_series(analysis, dims, variable)?;
    peak_and_classify(&series, lower_frac, upper_frac)
}
