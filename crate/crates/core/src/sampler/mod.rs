//! Gibbs sampler: configuration, parameter state, the conditional updates
//! for coefficients and the hierarchy, the sweep driver, and the posterior
//! draw store.

mod config;
mod gibbs;
mod state;
mod steps;
mod store;

pub use config::{PriorConfig, SamplerConfig};
pub use gibbs::run_gibbs;
pub use state::ParameterState;
pub use steps::{
    common_mean_posterior, common_variance_posteriors, national_equation_posterior,
    region_equation_posterior, sample_common_mean, sample_common_variances,
    sample_national_coeffs, sample_national_coeffs_with, sample_region_coeffs,
    sample_region_coeffs_with,
};
pub use store::{PosteriorDraw, PosteriorStore, StoreHeader};
