//! Structural analysis of the estimated system: recursive identification of
//! the uncertainty shock, impulse responses, forecast-error-variance
//! decompositions, posterior band summaries, and the cross-region peak
//! classification.

mod analyze;
mod cholesky;
mod classify;
mod fevd;
mod irf;
mod summary;

pub use analyze::{
    analyze_store, classify_regions, region_band_series, CovarianceWindow, StructuralAnalysis,
    StructuralSettings, DEFAULT_HORIZON,
};
pub use cholesky::{identify_cholesky, impact_columns, ShockDesign};
pub use classify::{peak_and_classify, BandSeries, PeakClassification, ResponseClass};
pub use fevd::{fevd, Fevd};
pub use irf::{impulse_response, ImpulseResponses, EXPLOSIVE_RADIUS};
pub use summary::{quantile, summarize_cells, SummaryGrid};
