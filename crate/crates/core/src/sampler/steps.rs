use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngExt};
use rand_distr::{Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{weighted_regression_posterior, GaussianPosterior};
use crate::model::{
    national_design, region_design, BlockDesign, ModelDims, NationalCoefficients, PanelDataset,
    RegionCoefficients, WeightMatrix,
};
use crate::sampler::{ParameterState, PriorConfig};

/// One target column with the common component (loading row × factor path)
/// subtracted: what the equation's own regression has to explain.
fn adjusted_target(
    targets: &DMatrix<f64>,
    column: usize,
    loadings: &DMatrix<f64>,
    factors: &DMatrix<f64>,
    shock_row: usize,
) -> DVector<f64> {
    DVector::from_fn(targets.nrows(), |t, _| {
        let mut v = targets[(t, column)];
        for f in 0..factors.ncols() {
            v -= loadings[(shock_row, f)] * factors[(t, f)];
        }
        v
    })
}

/// Gaussian conditional posterior for equation `equation` of region `region`,
/// given the current factors, volatilities, and hierarchy.
pub fn region_equation_posterior(
    block: &BlockDesign,
    dims: &ModelDims,
    state: &ParameterState,
    region: usize,
    equation: usize,
) -> Result<GaussianPosterior> {
    let shock = dims.national_vars + region * dims.region_vars + equation;
    let response = adjusted_target(
        &block.targets,
        equation,
        &state.loadings,
        &state.factors,
        shock,
    );
    let noise = state.log_vol_idio.column(shock).into_owned();
    let idx = RegionCoefficients::equation_indices(dims, equation);
    let prior_mean = DVector::from_iterator(idx.len(), idx.iter().map(|&j| state.hierarchy.mean[j]));
    let prior_var =
        DVector::from_iterator(idx.len(), idx.iter().map(|&j| state.hierarchy.variances[j]));
    weighted_regression_posterior(
        &block.design,
        &response,
        &noise,
        &prior_mean,
        &prior_var,
        &format!("region {region} equation {equation}"),
    )
}

/// Redraw all coefficient blocks of one region, equation by equation.
pub fn sample_region_coeffs<R: Rng>(
    data: &PanelDataset,
    w: &WeightMatrix,
    dims: &ModelDims,
    state: &ParameterState,
    region: usize,
    rng: &mut R,
) -> Result<RegionCoefficients> {
    let block = region_design(data, w, dims, region)?;
    sample_region_coeffs_with(&block, dims, state, region, rng)
}

/// [`sample_region_coeffs`] with the design already built, so the sweep can
/// reuse one design per region across iterations.
pub fn sample_region_coeffs_with<R: Rng>(
    block: &BlockDesign,
    dims: &ModelDims,
    state: &ParameterState,
    region: usize,
    rng: &mut R,
) -> Result<RegionCoefficients> {
    let mut out = RegionCoefficients::zeros(dims);
    for r in 0..dims.region_vars {
        let posterior = region_equation_posterior(block, dims, state, region, r)?;
        out.set_equation_row(r, &posterior.sample(rng));
    }
    Ok(out)
}

/// Per-coordinate shape and scale of the conditional inverse-gamma posterior
/// for the hierarchy variances, given the packed region coefficient vectors.
pub fn common_variance_posteriors(
    betas: &[DVector<f64>],
    mean: &DVector<f64>,
    prior: &PriorConfig,
) -> Vec<(f64, f64)> {
    let shape = prior.d0 + 0.5 * betas.len() as f64;
    (0..mean.len())
        .map(|j| {
            let ss: f64 = betas.iter().map(|b| (b[j] - mean[j]).powi(2)).sum();
            (shape, prior.d1 + 0.5 * ss)
        })
        .collect()
}

/// Redraw the hierarchy variances v from their conditional inverse-gamma law,
/// independently per coordinate.
pub fn sample_common_variances<R: Rng>(
    betas: &[DVector<f64>],
    mean: &DVector<f64>,
    prior: &PriorConfig,
    rng: &mut R,
) -> Result<DVector<f64>> {
    let posteriors = common_variance_posteriors(betas, mean, prior);
    let mut out = DVector::zeros(mean.len());
    for (j, &(shape, scale)) in posteriors.iter().enumerate() {
        let gamma = Gamma::new(shape, 1.0)
            .map_err(|e| Error::config(format!("hierarchy variance shape: {e}")))?;
        let g: f64 = rng.sample(gamma);
        out[j] = scale / g.max(f64::MIN_POSITIVE);
    }
    Ok(out)
}

/// Mean and standard deviation of the conditional posterior for the common
/// mean μ, coordinate by coordinate (all precisions are diagonal).
pub fn common_mean_posterior(
    betas: &[DVector<f64>],
    variances: &DVector<f64>,
    v0_scale: f64,
) -> (DVector<f64>, DVector<f64>) {
    let m = variances.len();
    let n = betas.len() as f64;
    let mut sums = DVector::zeros(m);
    for b in betas {
        sums += b;
    }
    let mut mean = DVector::zeros(m);
    let mut sd = DVector::zeros(m);
    for j in 0..m {
        let precision = 1.0 / v0_scale + n / variances[j];
        mean[j] = (sums[j] / variances[j]) / precision;
        sd[j] = precision.sqrt().recip();
    }
    (mean, sd)
}

/// Redraw the common mean μ given the packed region coefficient vectors and
/// the hierarchy variances. Needs no data.
pub fn sample_common_mean<R: Rng>(
    betas: &[DVector<f64>],
    variances: &DVector<f64>,
    v0_scale: f64,
    rng: &mut R,
) -> DVector<f64> {
    let (mean, sd) = common_mean_posterior(betas, variances, v0_scale);
    DVector::from_fn(mean.len(), |j, _| {
        mean[j] + sd[j] * rng.sample::<f64, _>(StandardNormal)
    })
}

/// Gaussian conditional posterior for one national equation.
pub fn national_equation_posterior(
    block: &BlockDesign,
    state: &ParameterState,
    equation: usize,
    national_coef_var: f64,
) -> Result<GaussianPosterior> {
    let response = adjusted_target(
        &block.targets,
        equation,
        &state.loadings,
        &state.factors,
        equation,
    );
    let noise = state.log_vol_idio.column(equation).into_owned();
    let m = block.design.ncols();
    weighted_regression_posterior(
        &block.design,
        &response,
        &noise,
        &DVector::zeros(m),
        &DVector::from_element(m, national_coef_var),
        &format!("national equation {equation}"),
    )
}

/// Redraw the national coefficient blocks, equation by equation.
pub fn sample_national_coeffs<R: Rng>(
    data: &PanelDataset,
    dims: &ModelDims,
    state: &ParameterState,
    national_coef_var: f64,
    rng: &mut R,
) -> Result<NationalCoefficients> {
    let block = national_design(data, dims, state.national.intercept.is_some())?;
    sample_national_coeffs_with(&block, dims, state, national_coef_var, rng)
}

/// [`sample_national_coeffs`] with the design already built.
pub fn sample_national_coeffs_with<R: Rng>(
    block: &BlockDesign,
    dims: &ModelDims,
    state: &ParameterState,
    national_coef_var: f64,
    rng: &mut R,
) -> Result<NationalCoefficients> {
    let mut out = NationalCoefficients::zeros(dims, state.national.intercept.is_some());
    for r in 0..dims.national_vars {
        let posterior = national_equation_posterior(block, state, r, national_coef_var)?;
        out.set_equation_row(r, &posterior.sample(rng));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, GibbsStep};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use statrs::distribution::{ContinuousCDF, Gamma as GammaDist};

    fn dims() -> ModelDims {
        ModelDims {
            regions: 3,
            region_vars: 2,
            national_vars: 1,
            domestic_lags: 1,
            foreign_lags: 1,
            factors: 1,
            periods: 31,
        }
    }

    fn random_dataset(dims: &ModelDims, seed: u64) -> PanelDataset {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let regions = (0..dims.regions)
            .map(|_| {
                DMatrix::from_fn(dims.periods, dims.region_vars, |_, _| {
                    rng.sample::<f64, _>(StandardNormal)
                })
            })
            .collect();
        let national = DMatrix::from_fn(dims.periods, dims.national_vars, |_, _| {
            rng.sample::<f64, _>(StandardNormal)
        });
        PanelDataset::new(
            regions,
            national,
            (0..dims.regions).map(|i| format!("r{i}")).collect(),
            (0..dims.region_vars).map(|v| format!("y{v}")).collect(),
            (0..dims.national_vars).map(|v| format!("z{v}")).collect(),
        )
        .unwrap()
    }

    /// Fixed conditioning point with nonzero loadings, factors, hierarchy.
    fn conditioning_state(dims: &ModelDims, data: &PanelDataset) -> ParameterState {
        let mut state = ParameterState::initial(data, dims, 3, false).unwrap();
        let m = dims.region_coef_len();
        state.hierarchy.mean = DVector::from_fn(m, |j, _| 0.05 * (j as f64 - 3.0));
        state.hierarchy.variances = DVector::from_fn(m, |j, _| 0.2 + 0.01 * j as f64);
        let shocks = dims.shock_dim();
        state.loadings = DMatrix::from_fn(shocks, dims.factors, |r, f| {
            0.4 * ((r + f) as f64).sin()
        });
        for (t, mut row) in state.log_vol_idio.row_iter_mut().enumerate() {
            for r in 0..shocks {
                row[r] = -0.5 + 0.3 * ((t + r) as f64 * 0.7).sin();
            }
        }
        state
    }

    #[test]
    fn dogmatic_hierarchy_pins_region_draws_to_the_mean() {
        let dims = dims();
        let data = random_dataset(&dims, 11);
        let w = WeightMatrix::uniform(dims.regions).unwrap();
        let mut state = conditioning_state(&dims, &data);

        // At prior variance 1e-12 the conditional collapses onto the μ-slice:
        // the mean is pinned and the draw scale is at most 1e-6 — which is
        // also why a single draw is only guaranteed inside the 1e-6 band once
        // the prior tightens a little further (the draw sd at 1e-12 is
        // exactly 1e-6, so a standard-normal deviate can poke out).
        state.hierarchy.variances.fill(1e-12);
        let block = region_design(&data, &w, &dims, 1).unwrap();
        for r in 0..dims.region_vars {
            let posterior = region_equation_posterior(&block, &dims, &state, 1, r).unwrap();
            let cov = posterior.covariance();
            let idx = RegionCoefficients::equation_indices(&dims, r);
            for (a, &j) in idx.iter().enumerate() {
                assert_abs_diff_eq!(posterior.mean[a], state.hierarchy.mean[j], epsilon = 1e-9);
                assert!(cov[(a, a)].sqrt() <= 1e-6);
            }
        }

        state.hierarchy.variances.fill(1e-14);
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let draw = sample_region_coeffs(&data, &w, &dims, &state, 1, &mut rng).unwrap();
        let packed = draw.pack();
        for j in 0..packed.len() {
            assert_abs_diff_eq!(packed[j], state.hierarchy.mean[j], epsilon = 1e-6);
        }
    }

    #[test]
    fn diffuse_prior_homoscedastic_posterior_mean_is_ols() {
        let dims = dims();
        let data = random_dataset(&dims, 12);
        let w = WeightMatrix::uniform(dims.regions).unwrap();
        let mut state = conditioning_state(&dims, &data);
        state.hierarchy.variances.fill(1e12);
        state.log_vol_idio.fill(0.3); // constant noise cancels in OLS
        let block = region_design(&data, &w, &dims, 0).unwrap();
        for r in 0..dims.region_vars {
            let posterior = region_equation_posterior(&block, &dims, &state, 0, r).unwrap();
            // Normal equations, solved independently of the sampler's path.
            let shock = dims.national_vars + r;
            let y = adjusted_target(&block.targets, r, &state.loadings, &state.factors, shock);
            let xtx = block.design.transpose() * &block.design;
            let xty = block.design.transpose() * y;
            let ols = xtx.lu().solve(&xty).unwrap();
            for j in 0..ols.len() {
                assert_abs_diff_eq!(posterior.mean[j], ols[j], epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn region_draws_match_analytic_moments() {
        let dims = dims(); // periods=31 → effective sample T=30, k=2
        let data = random_dataset(&dims, 13);
        let w = WeightMatrix::uniform(dims.regions).unwrap();
        let state = conditioning_state(&dims, &data);
        let block = region_design(&data, &w, &dims, 2).unwrap();

        let n_draws = 50_000;
        let m = dims.region_coef_len();
        let mut sum = DVector::<f64>::zeros(m);
        let mut outer = DMatrix::<f64>::zeros(m, m);
        for d in 0..n_draws {
            let mut rng = substream(99, d as u64, GibbsStep::RegionCoeffs, 2);
            let packed = sample_region_coeffs_with(&block, &dims, &state, 2, &mut rng)
                .unwrap()
                .pack();
            sum += &packed;
            outer.ger(1.0, &packed, &packed, 1.0);
        }
        let emp_mean = &sum / n_draws as f64;
        let emp_cov = outer / n_draws as f64 - &emp_mean * emp_mean.transpose();

        // Analytic conditional moments, mapped into packed coordinates.
        let mut ana_mean = DVector::<f64>::zeros(m);
        let mut ana_cov = DMatrix::<f64>::zeros(m, m);
        for r in 0..dims.region_vars {
            let posterior = region_equation_posterior(&block, &dims, &state, 2, r).unwrap();
            let cov = posterior.covariance();
            let idx = RegionCoefficients::equation_indices(&dims, r);
            for (a, &ja) in idx.iter().enumerate() {
                ana_mean[ja] = posterior.mean[a];
                for (b, &jb) in idx.iter().enumerate() {
                    ana_cov[(ja, jb)] = cov[(a, b)];
                }
            }
        }

        let n = n_draws as f64;
        for j in 0..m {
            let se = (ana_cov[(j, j)] / n).sqrt();
            assert!(
                (emp_mean[j] - ana_mean[j]).abs() < 3.0 * se,
                "mean coordinate {j}: empirical {} vs analytic {} (3se = {})",
                emp_mean[j],
                ana_mean[j],
                3.0 * se
            );
        }
        for a in 0..m {
            for b in 0..m {
                let se = ((ana_cov[(a, a)] * ana_cov[(b, b)] + ana_cov[(a, b)].powi(2)) / n).sqrt();
                assert!(
                    (emp_cov[(a, b)] - ana_cov[(a, b)]).abs() < 3.0 * se,
                    "covariance ({a},{b}): empirical {} vs analytic {} (3se = {})",
                    emp_cov[(a, b)],
                    ana_cov[(a, b)],
                    3.0 * se
                );
            }
        }
    }

    #[test]
    fn common_mean_with_no_regions_is_the_prior() {
        let v0 = 7.0;
        let variances = DVector::from_element(3, 0.5);
        let n_draws = 40_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for d in 0..n_draws {
            let mut rng = substream(4, d as u64, GibbsStep::HierarchyMean, 0);
            let draw = sample_common_mean(&[], &variances, v0, &mut rng);
            sum += draw[0];
            sumsq += draw[0] * draw[0];
        }
        let n = n_draws as f64;
        let mean = sum / n;
        let var = sumsq / n - mean * mean;
        assert!(mean.abs() < 4.0 * (v0 / n).sqrt());
        assert!((var - v0).abs() < 5.0 * v0 * (2.0 / n).sqrt());
    }

    #[test]
    fn flat_prior_posterior_mean_is_the_cross_region_average() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let m = 12;
        let betas: Vec<DVector<f64>> = (0..3)
            .map(|_| DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let variances = DVector::from_element(m, 0.3);
        let (mean, _) = common_mean_posterior(&betas, &variances, 1e12);
        let mut avg = DVector::zeros(m);
        for b in &betas {
            avg += b;
        }
        avg /= betas.len() as f64;
        for j in 0..m {
            assert_abs_diff_eq!(mean[j], avg[j], epsilon = 1e-5);
        }
    }

    #[test]
    fn common_mean_draws_match_analytic_moments() {
        // Two-coordinate, three-region instance checked against the
        // closed-form posterior.
        let m = 2;
        let betas = vec![
            DVector::from_vec(vec![0.4, -0.2]),
            DVector::from_vec(vec![0.1, 0.3]),
            DVector::from_vec(vec![-0.5, 0.6]),
        ];
        let variances = DVector::from_vec(vec![0.25, 0.9]);
        let v0 = 10.0;
        let (ana_mean, ana_sd) = common_mean_posterior(&betas, &variances, v0);

        let n_draws = 50_000;
        let mut sum = DVector::<f64>::zeros(m);
        let mut sumsq = DVector::<f64>::zeros(m);
        for t in 0..n_draws {
            let mut rng = substream(21, t as u64, GibbsStep::HierarchyMean, 0);
            let draw = sample_common_mean(&betas, &variances, v0, &mut rng);
            for j in 0..m {
                sum[j] += draw[j];
                sumsq[j] += draw[j] * draw[j];
            }
        }
        let n = n_draws as f64;
        for j in 0..m {
            let emp_mean = sum[j] / n;
            let emp_var = sumsq[j] / n - emp_mean * emp_mean;
            let ana_var = ana_sd[j] * ana_sd[j];
            assert!((emp_mean - ana_mean[j]).abs() < 3.0 * ana_sd[j] / n.sqrt());
            assert!((emp_var - ana_var).abs() < 3.0 * ana_var * (2.0 / n).sqrt());
        }
    }

    /// Two-sided Kolmogorov–Smirnov test against a reference CDF, returning
    /// the asymptotic p-value (with the Stephens small-sample correction).
    fn ks_p_value(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
        sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = sample.len() as f64;
        let mut d_stat: f64 = 0.0;
        for (i, &x) in sample.iter().enumerate() {
            let f = cdf(x);
            let hi = (i as f64 + 1.0) / n - f;
            let lo = f - i as f64 / n;
            d_stat = d_stat.max(hi).max(lo);
        }
        let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d_stat;
        let mut p = 0.0;
        for k in 1..=100 {
            let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
            p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
        }
        p.clamp(0.0, 1.0)
    }

    #[test]
    fn zero_dispersion_variances_follow_the_prior_update() {
        // All β_i equal to μ: the conditional collapses to
        // InverseGamma(d0 + N/2, d1), testable by KS against that law.
        let m = 12;
        let n_regions = 3;
        let mu = DVector::from_fn(m, |j, _| 0.1 * j as f64);
        let betas = vec![mu.clone(); n_regions];
        let prior = PriorConfig::default();
        let shape = prior.d0 + 0.5 * n_regions as f64;

        let mut draws = Vec::with_capacity(10_000);
        for t in 0..10_000 {
            let mut rng = substream(31, t as u64, GibbsStep::HierarchyVariances, 0);
            let v = sample_common_variances(&betas, &mu, &prior, &mut rng).unwrap();
            draws.push(v[0]);
        }
        let gamma = GammaDist::new(shape, 1.0).unwrap();
        // P(V ≤ v) for V = scale/G, G ~ Gamma(shape, 1): survival of G at scale/v.
        let p = ks_p_value(&mut draws, |v| 1.0 - gamma.cdf(prior.d1 / v));
        assert!(p > 0.01, "KS p-value {p} too small");
    }

    #[test]
    fn single_deviation_moves_the_scale_parameter() {
        let m = 12;
        let mu = DVector::zeros(m);
        let delta = 0.5;
        let mut beta = DVector::zeros(m);
        beta[3] = delta;
        let betas = vec![beta];
        let prior = PriorConfig::default();
        let posteriors = common_variance_posteriors(&betas, &mu, &prior);
        assert_eq!(posteriors[3].0, prior.d0 + 0.5);
        assert_eq!(posteriors[3].1, prior.d1 + delta * delta / 2.0);
        assert_eq!(posteriors[0].1, prior.d1);
    }

    #[test]
    fn variance_reciprocal_matches_gamma_mean() {
        let m = 12;
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let mu = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let betas: Vec<DVector<f64>> = (0..3)
            .map(|_| DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let prior = PriorConfig::default();
        let (shape, scale) = common_variance_posteriors(&betas, &mu, &prior)[2];

        let n_draws = 100_000;
        let mut sum_inv = 0.0;
        for t in 0..n_draws {
            let mut rng = substream(5, t as u64, GibbsStep::HierarchyVariances, 0);
            let v = sample_common_variances(&betas, &mu, &prior, &mut rng).unwrap();
            sum_inv += 1.0 / v[2];
        }
        let n = n_draws as f64;
        let emp = sum_inv / n;
        // 1/v ~ Gamma(shape, rate=scale): mean shape/scale, sd sqrt(shape)/scale.
        let se = shape.sqrt() / scale / n.sqrt();
        assert!(
            (emp - shape / scale).abs() < 3.0 * se,
            "E[1/v] = {emp} vs {} (3se = {})",
            shape / scale,
            3.0 * se
        );
    }

    #[test]
    fn dogmatic_national_prior_collapses_to_zero() {
        let d = dims();
        let data = random_dataset(&d, 23);
        let state = conditioning_state(&d, &data);

        // Collapse at 1e-12: mean pinned to zero, draw scale ≤ 1e-6.
        let block = national_design(&data, &d, false).unwrap();
        let posterior = national_equation_posterior(&block, &state, 0, 1e-12).unwrap();
        let cov = posterior.covariance();
        for j in 0..posterior.mean.len() {
            assert!(posterior.mean[j].abs() < 1e-9);
            assert!(cov[(j, j)].sqrt() <= 1e-6);
        }

        // One more order of prior tightening puts whole draws in the band.
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let draw = sample_national_coeffs(&data, &d, &state, 1e-14, &mut rng).unwrap();
        for block in draw.domestic.iter().chain(&draw.regional) {
            for v in block.iter() {
                assert!(v.abs() < 1e-6);
            }
        }
        assert!(draw.intercept.is_none());
    }

    #[test]
    fn diffuse_national_prior_matches_ols() {
        let d = dims();
        let data = random_dataset(&d, 24);
        let mut state = conditioning_state(&d, &data);
        state.log_vol_idio.fill(-0.2);
        let block = national_design(&data, &d, false).unwrap();
        let posterior = national_equation_posterior(&block, &state, 0, 1e12).unwrap();
        let y = adjusted_target(&block.targets, 0, &state.loadings, &state.factors, 0);
        let xtx = block.design.transpose() * &block.design;
        let xty = block.design.transpose() * y;
        let ols = xtx.lu().solve(&xty).unwrap();
        for j in 0..ols.len() {
            assert_abs_diff_eq!(posterior.mean[j], ols[j], epsilon = 1e-6);
        }
    }

    #[test]
    fn national_draws_match_analytic_moments() {
        let d = dims();
        let data = random_dataset(&d, 25);
        let state = conditioning_state(&d, &data);
        let block = national_design(&data, &d, false).unwrap();
        let prior_var = 10.0;
        let posterior = national_equation_posterior(&block, &state, 0, prior_var).unwrap();
        let ana_cov = posterior.covariance();
        let m = block.design.ncols();

        let n_draws = 50_000;
        let mut sum = DVector::<f64>::zeros(m);
        let mut outer = DMatrix::<f64>::zeros(m, m);
        for t in 0..n_draws {
            let mut rng = substream(71, t as u64, GibbsStep::NationalCoeffs, 0);
            let draw = sample_national_coeffs_with(&block, &d, &state, prior_var, &mut rng)
                .unwrap()
                .equation_row(0);
            sum += &draw;
            outer.ger(1.0, &draw, &draw, 1.0);
        }
        let n = n_draws as f64;
        let emp_mean = &sum / n;
        let emp_cov = outer / n - &emp_mean * emp_mean.transpose();
        for j in 0..m {
            let se = (ana_cov[(j, j)] / n).sqrt();
            assert!((emp_mean[j] - posterior.mean[j]).abs() < 3.0 * se);
        }
        for a in 0..m {
            for b in 0..m {
                let se = ((ana_cov[(a, a)] * ana_cov[(b, b)] + ana_cov[(a, b)].powi(2)) / n).sqrt();
                assert!((emp_cov[(a, b)] - ana_cov[(a, b)]).abs() < 3.0 * se);
            }
        }
    }

    #[test]
    fn intercept_flag_reaches_the_draw() {
        let d = dims();
        let data = random_dataset(&d, 26);
        let mut state = conditioning_state(&d, &data);
        state.national = NationalCoefficients::zeros(&d, true);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let draw = sample_national_coeffs(&data, &d, &state, 10.0, &mut rng).unwrap();
        assert!(draw.intercept.is_some());
    }
}
