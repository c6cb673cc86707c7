use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::standard_normal_vector;
use crate::model::{
    foreign_averages, national_design, region_design_with_averages, BlockDesign, ModelDims,
    PanelDataset, WeightMatrix,
};
use crate::rng::{substream, GibbsStep};
use crate::sampler::{
    sample_common_mean, sample_common_variances, sample_national_coeffs_with,
    sample_region_coeffs_with, ParameterState, PosteriorStore, PriorConfig, SamplerConfig,
};
use crate::sv::{sample_factors_path_with, sample_loadings, sample_volatility_path, SvParams};

/// Attach the failing iteration and step to an error bubbling out of a sweep.
fn step_error(iteration: usize, step: GibbsStep, e: Error) -> Error {
    e.with_prefix(&format!("iteration {iteration}, step {}", step.label()))
}

/// Stacked reduced-form residuals (national block first) implied by the
/// current coefficients, using the precomputed block designs.
fn stacked_residuals(
    dims: &ModelDims,
    state: &ParameterState,
    region_blocks: &[BlockDesign],
    national_block: &BlockDesign,
) -> DMatrix<f64> {
    let t_eff = dims.effective_periods();
    let mut residuals = DMatrix::zeros(t_eff, dims.shock_dim());
    let national = &national_block.targets
        - &national_block.design * state.national.coefficient_matrix(dims).transpose();
    residuals
        .view_mut((0, 0), (t_eff, dims.national_vars))
        .copy_from(&national);
    for (i, block) in region_blocks.iter().enumerate() {
        let res = &block.targets - &block.design * state.regions[i].coefficient_matrix().transpose();
        residuals
            .view_mut((0, dims.region_offset(i)), (t_eff, dims.region_vars))
            .copy_from(&res);
    }
    residuals
}

/// Run the full Gibbs chain and return the retained draws.
///
/// Each iteration sweeps, in order: region coefficients (equation by
/// equation, parallel across regions), hierarchy variances, the common mean,
/// national coefficients, factor loadings, the latent factor path, and every
/// volatility series (parallel across series). Randomness is partitioned by
/// `(seed, iteration, step, unit)` substreams, so thread scheduling never
/// changes the draw sequence.
pub fn run_gibbs(
    data: &PanelDataset,
    w: &WeightMatrix,
    dims: &ModelDims,
    prior: &PriorConfig,
    cfg: &SamplerConfig,
) -> Result<PosteriorStore> {
    prior.validate()?;
    cfg.validate()?;
    dims.validate()?;
    data.check_dims(dims)?;
    if w.regions() != dims.regions {
        return Err(Error::config(format!(
            "weight matrix covers {} regions, dims say {}",
            w.regions(),
            dims.regions
        )));
    }

    // Designs depend only on the data; build them once.
    let averages = foreign_averages(data.regions(), w)?;
    let region_blocks: Vec<BlockDesign> = (0..dims.regions)
        .map(|i| region_design_with_averages(data, &averages[i], dims, i))
        .collect();
    let national_block = national_design(data, dims, cfg.national_intercept)?;

    let mut state = ParameterState::initial(data, dims, cfg.seed, cfg.national_intercept)?;
    let mut store = PosteriorStore::new(
        dims,
        prior,
        cfg,
        w,
        data.region_names.clone(),
        data.region_var_names.clone(),
        data.national_var_names.clone(),
    );

    let seed = cfg.seed;
    let n_factors = dims.factors;
    let sv_prior = prior.sv_prior();

    for it in 0..cfg.total_iterations {
        let iter = it as u64;

        // (i) Region coefficients, independent across regions given the rest.
        state.regions = (0..dims.regions)
            .into_par_iter()
            .map(|i| {
                let mut rng = substream(seed, iter, GibbsStep::RegionCoeffs, i as u64);
                sample_region_coeffs_with(&region_blocks[i], dims, &state, i, &mut rng)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| step_error(it, GibbsStep::RegionCoeffs, e))?;

        let betas: Vec<DVector<f64>> = state.regions.iter().map(|r| r.pack()).collect();

        // (i-b) Hierarchy variances.
        {
            let mut rng = substream(seed, iter, GibbsStep::HierarchyVariances, 0);
            state.hierarchy.variances =
                sample_common_variances(&betas, &state.hierarchy.mean, prior, &mut rng)
                    .map_err(|e| step_error(it, GibbsStep::HierarchyVariances, e))?;
        }

        // (ii) Common mean.
        {
            let mut rng = substream(seed, iter, GibbsStep::HierarchyMean, 0);
            state.hierarchy.mean =
                sample_common_mean(&betas, &state.hierarchy.variances, prior.v0_scale, &mut rng);
        }

        // (iii) National coefficients.
        {
            let mut rng = substream(seed, iter, GibbsStep::NationalCoeffs, 0);
            state.national = sample_national_coeffs_with(
                &national_block,
                dims,
                &state,
                prior.national_coef_var,
                &mut rng,
            )
            .map_err(|e| step_error(it, GibbsStep::NationalCoeffs, e))?;
        }

        let residuals = stacked_residuals(dims, &state, &region_blocks, &national_block);

        // (iv) Factor loadings.
        {
            let mut rng = substream(seed, iter, GibbsStep::Loadings, 0);
            state.loadings = sample_loadings(
                &residuals,
                &state.factors,
                &state.log_vol_idio,
                prior.loading_var,
                &mut rng,
            )
            .map_err(|e| step_error(it, GibbsStep::Loadings, e))?;
        }

        // (v) Latent factors, one substream per period.
        state.factors = sample_factors_path_with(
            &state.loadings,
            &state.log_vol_factors,
            &state.log_vol_idio,
            &residuals,
            |t| {
                let mut rng = substream(seed, iter, GibbsStep::Factors, t as u64);
                standard_normal_vector(&mut rng, n_factors)
            },
        )
        .map_err(|e| step_error(it, GibbsStep::Factors, e))?;

        // (vi) Volatilities: factor series first, then idiosyncratic ones.
        {
            let factors = &state.factors;
            let loadings = &state.loadings;
            let updates: Result<Vec<(Vec<f64>, SvParams)>> = (0..n_factors + dims.shock_dim())
                .into_par_iter()
                .map(|unit| {
                    let mut rng = substream(seed, iter, GibbsStep::Volatility, unit as u64);
                    if unit < n_factors {
                        let series: Vec<f64> = factors.column(unit).iter().copied().collect();
                        let prev: Vec<f64> =
                            state.log_vol_factors.column(unit).iter().copied().collect();
                        sample_volatility_path(
                            &series,
                            &prev,
                            &state.factor_sv[unit],
                            &sv_prior,
                            &mut rng,
                        )
                        .map_err(|e| Error::numerical(format!("factor {unit}: {e}")))
                    } else {
                        let r = unit - n_factors;
                        let series: Vec<f64> = (0..residuals.nrows())
                            .map(|t| {
                                let mut v = residuals[(t, r)];
                                for j in 0..n_factors {
                                    v -= loadings[(r, j)] * factors[(t, j)];
                                }
                                v
                            })
                            .collect();
                        let prev: Vec<f64> =
                            state.log_vol_idio.column(r).iter().copied().collect();
                        sample_volatility_path(&series, &prev, &state.idio_sv[r], &sv_prior, &mut rng)
                            .map_err(|e| Error::numerical(format!("series {r}: {e}")))
                    }
                })
                .collect();
            let updates = updates.map_err(|e| step_error(it, GibbsStep::Volatility, e))?;
            for (unit, (path, params)) in updates.into_iter().enumerate() {
                if unit < n_factors {
                    for (t, v) in path.iter().enumerate() {
                        state.log_vol_factors[(t, unit)] = *v;
                    }
                    state.factor_sv[unit] = params;
                } else {
                    let r = unit - n_factors;
                    for (t, v) in path.iter().enumerate() {
                        state.log_vol_idio[(t, r)] = *v;
                    }
                    state.idio_sv[r] = params;
                }
            }
        }

        if it >= cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0 {
            store
                .push(&state)
                .map_err(|e| e.with_prefix(&format!("iteration {it}, storing the draw")))?;
        }
    }

    Ok(store)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{synth_generate, SynthSpec};
    use tempfile::tempdir;

    fn quick_cfg(total: usize, burn: usize, thin: usize, seed: u64) -> SamplerConfig {
        SamplerConfig {
            total_iterations: total,
            burn_in: burn,
            thin,
            seed,
            national_intercept: false,
        }
    }

    fn small_instance() -> (SynthSpec, crate::synth::SynthOutput) {
        let spec = SynthSpec::benchmark(40);
        let out = synth_generate(&spec, 42).unwrap();
        (spec, out)
    }

    #[test]
    fn retains_exactly_the_post_burn_in_draws() {
        let (spec, out) = small_instance();
        let store = run_gibbs(
            &out.data,
            &spec.weights,
            &spec.dims,
            &PriorConfig::default(),
            &quick_cfg(10, 5, 1, 7),
        )
        .unwrap();
        assert_eq!(store.draw_count(), 5);

        let thinned = run_gibbs(
            &out.data,
            &spec.weights,
            &spec.dims,
            &PriorConfig::default(),
            &quick_cfg(10, 5, 2, 7),
        )
        .unwrap();
        assert_eq!(thinned.draw_count(), 3);
    }

    #[test]
    fn identical_seeds_give_bit_identical_stores() {
        let (spec, out) = small_instance();
        let prior = PriorConfig::default();
        let a = run_gibbs(&out.data, &spec.weights, &spec.dims, &prior, &quick_cfg(8, 4, 1, 123))
            .unwrap();
        let b = run_gibbs(&out.data, &spec.weights, &spec.dims, &prior, &quick_cfg(8, 4, 1, 123))
            .unwrap();
        let c = run_gibbs(&out.data, &spec.weights, &spec.dims, &prior, &quick_cfg(8, 4, 1, 124))
            .unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);

        let dir = tempdir().unwrap();
        let pa = dir.path().join("a.bin");
        let pb = dir.path().join("b.bin");
        a.save(&pa).unwrap();
        b.save(&pb).unwrap();
        assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
    }

    #[test]
    fn draws_stay_finite_and_admissible() {
        let (spec, out) = small_instance();
        let store = run_gibbs(
            &out.data,
            &spec.weights,
            &spec.dims,
            &PriorConfig::default(),
            &quick_cfg(30, 10, 1, 9),
        )
        .unwrap();
        for draw in store.draws() {
            assert!(draw.raw().iter().all(|v| v.is_finite()));
            assert!(draw.hierarchy_variances().iter().all(|&v| v > 0.0));
            for p in draw.factor_sv().iter().chain(draw.idio_sv().iter()) {
                assert!(p.persistence.abs() < 1.0);
                assert!(p.innovation_var > 0.0);
            }
        }
    }

    #[test]
    fn mismatched_weights_are_rejected() {
        let (spec, out) = small_instance();
        let err = run_gibbs(
            &out.data,
            &WeightMatrix::uniform(3).unwrap(),
            &spec.dims,
            &PriorConfig::default(),
            &quick_cfg(4, 2, 1, 1),
        )
        .unwrap_err();
        assert!(err.to_string().contains("regions"));
    }

    #[test]
    fn recovers_the_hierarchy_mean_on_synthetic_data() {
        // Panel drawn from the benchmark system; the posterior median of the
        // common mean must land near the generating values. All benchmark
        // coordinates are small, so every coordinate is checked.
        let spec = SynthSpec::benchmark(300);
        let out = synth_generate(&spec, 2024).unwrap();
        let cfg = quick_cfg(800, 400, 1, 55);
        let store = run_gibbs(
            &out.data,
            &spec.weights,
            &spec.dims,
            &PriorConfig::default(),
            &cfg,
        )
        .unwrap();

        let m = spec.dims.region_coef_len();
        let n_draws = store.draw_count();
        let mut worst = 0.0f64;
        for j in 0..m {
            let mut values: Vec<f64> = store.draws().map(|d| d.hierarchy_mean()[j]).collect();
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = 0.5 * (values[(n_draws - 1) / 2] + values[n_draws / 2]);
            let gap = (median - spec.hierarchy.mean[j]).abs();
            worst = worst.max(gap);
            assert!(
                gap < 0.15,
                "coordinate {j}: posterior median {median} vs truth {} (|gap| = {gap})",
                spec.hierarchy.mean[j]
            );
        }
        // The chain must actually move: medians are not all at the init.
        assert!(worst > 0.0);
    }
}
