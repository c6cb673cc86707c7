//! Data preparation: survey-based inequality measures, temporal
//! disaggregation, seasonal adjustment, series transforms, spatial weights,
//! and CSV ingestion.

mod gini;
mod ingest;
mod period;
mod seasonal;
mod spatial;
mod spline;
mod transforms;

pub use gini::{equivalize, gini_by_period, weighted_gini, SurveyRecord};
pub use ingest::{
    read_centroid_csv, read_panel_csv, read_survey_csv, read_weights_csv, write_centroid_csv,
    write_panel_csv, write_weights_csv,
};
pub use period::{check_contiguous, next_period, parse_period, period_label};
pub use seasonal::deseasonalize;
pub use spatial::{inverse_distance_weights, Centroids, DistanceConvention};
pub use spline::{annual_to_quarterly_spline, SplineResult};
pub use transforms::{apply_transforms, Directive, RawPanel, SeriesTransform, TransformSpec};
