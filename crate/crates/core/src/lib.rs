//! Bayesian estimation engine for a hierarchical multi-region vector
//! autoregression with factor stochastic volatility.
//!
//! The model links `N` region-level VARX blocks through weighted
//! cross-sectional averages of the other regions' variables, adds a national
//! VAR block driven by cross-region averages, and lets the stacked shock
//! vector follow a factor structure in which both common-factor and
//! idiosyncratic log variances evolve as AR(1) processes. Region coefficient
//! vectors are pooled through a common Gaussian distribution whose mean and
//! element-wise variances are estimated alongside everything else by a Gibbs
//! sampler.
//!
//! Crate layout:
//!
//! * [`model`] — dimension bookkeeping, coefficient containers, residual
//!   evaluation, and the stacking of all blocks into one global linear system.
//! * [`pipeline`] — data preparation: income equivalization, weighted Gini,
//!   annual-to-quarterly spline interpolation, deseasonalization, log/diff
//!   transforms, and inverse-distance weight matrices.
//! * [`sampler`] — prior and sampler configuration, the conditional draws for
//!   coefficients and the hierarchy, the Gibbs driver, and posterior storage.
//! * [`sv`] — latent factor draws, factor loadings, and auxiliary-mixture
//!   stochastic-volatility path sampling.
//! * [`structural`] — Cholesky identification, impulse responses,
//!   forecast-error-variance decompositions, quantile summaries, and the
//!   region response classification.
//! * [`synth`] — synthetic panel generation from a fully specified system,
//!   for calibration runs and recovery tests.
//! * [`cli`] — command-line front end, configuration handling, and the
//!   response-on-covariates regression summary.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod model;
pub mod pipeline;
pub mod rng;
pub mod sampler;
pub mod structural;
pub mod sv;
pub mod synth;

pub use error::{Error, Result};
