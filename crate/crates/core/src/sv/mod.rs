//! Stochastic volatility and latent factors: the auxiliary-mixture
//! linearization, scalar forward-filtering backward-sampling, AR(1)
//! parameter updates with an interweaving refinement, and the per-period
//! factor and loading conditionals.

mod factors;
mod ffbs;
mod mixture;
mod params;

pub use factors::{
    factor_conditional, loading_posterior, sample_factors_path, sample_factors_path_with,
    sample_loadings, FactorConditional,
};
pub use ffbs::{ffbs_draw, ffbs_draw_with};
pub use mixture::{
    component_posterior, linearized_observation, sample_indicators, LOG_OFFSET, MIX_MEAN,
    MIX_PROB, MIX_VAR,
};
pub use params::{sample_volatility_path, SvParams, SvPrior};
