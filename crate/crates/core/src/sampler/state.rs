use nalgebra::DMatrix;
use rand::RngExt;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::model::{HierarchyParams, ModelDims, NationalCoefficients, PanelDataset, RegionCoefficients};
use crate::rng::{substream, GibbsStep};
use crate::sv::SvParams;

/// Every latent quantity the Gibbs sweep updates, in one place.
///
/// Volatility paths and factors live on the effective sample (the periods
/// that remain after conditioning on initial lags), so their row count is
/// `dims.effective_periods()`.
#[derive(Clone, Debug)]
pub struct ParameterState {
    /// Region coefficient blocks, one per region.
    pub regions: Vec<RegionCoefficients>,
    /// National equation coefficients.
    pub national: NationalCoefficients,
    /// Cross-region mean and variance of the coefficient distribution.
    pub hierarchy: HierarchyParams,
    /// Factor loadings, one row per shock series (national block first).
    pub loadings: DMatrix<f64>,
    /// Latent factors, one row per effective period.
    pub factors: DMatrix<f64>,
    /// Log variance paths of the factors (rows = periods).
    pub log_vol_factors: DMatrix<f64>,
    /// Log variance paths of the idiosyncratic shocks (rows = periods).
    pub log_vol_idio: DMatrix<f64>,
    /// Volatility process parameters for each factor.
    pub factor_sv: Vec<SvParams>,
    /// Volatility process parameters for each idiosyncratic series.
    pub idio_sv: Vec<SvParams>,
}

/// Sample variance of one observed series on the effective sample, floored
/// away from zero so its logarithm is usable as a volatility level.
fn column_log_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    let var = if values.len() > 1 { ss / (n - 1.0) } else { 1.0 };
    var.max(1e-8).ln()
}

impl ParameterState {
    /// Starting point of the chain: zero coefficients and loadings, a neutral
    /// hierarchy, standard-normal factors, unit factor volatility, and
    /// idiosyncratic volatility levels matched to each observed series'
    /// sample variance.
    pub fn initial(
        data: &PanelDataset,
        dims: &ModelDims,
        seed: u64,
        national_intercept: bool,
    ) -> Result<Self> {
        data.check_dims(dims)?;
        let t_eff = dims.effective_periods();
        let shocks = dims.shock_dim();
        let factors_n = dims.factors;
        let skip = dims.max_lag();

        let mut rng = substream(seed, 0, GibbsStep::Init, 0);
        let factors =
            DMatrix::from_fn(t_eff, factors_n, |_, _| rng.sample::<f64, _>(StandardNormal));

        // One constant log-variance path per shock series, set from the data.
        let mut idio_sv = Vec::with_capacity(shocks);
        let mut log_vol_idio = DMatrix::zeros(t_eff, shocks);
        for r in 0..shocks {
            let column: Vec<f64> = (0..t_eff)
                .map(|t| {
                    let row = skip + t;
                    if r < dims.national_vars {
                        data.national()[(row, r)]
                    } else {
                        let i = (r - dims.national_vars) / dims.region_vars;
                        let v = (r - dims.national_vars) % dims.region_vars;
                        data.region(i)[(row, v)]
                    }
                })
                .collect();
            let level = column_log_variance(&column);
            log_vol_idio.column_mut(r).fill(level);
            idio_sv.push(SvParams {
                level,
                persistence: 0.9,
                innovation_var: 0.1,
            });
        }

        let factor_sv = vec![
            SvParams {
                level: 0.0,
                persistence: 0.9,
                innovation_var: 0.1,
            };
            factors_n
        ];

        Ok(ParameterState {
            regions: vec![RegionCoefficients::zeros(dims); dims.regions],
            national: NationalCoefficients::zeros(dims, national_intercept),
            hierarchy: HierarchyParams::neutral(dims.region_coef_len()),
            loadings: DMatrix::zeros(shocks, factors_n),
            factors,
            log_vol_factors: DMatrix::zeros(t_eff, factors_n),
            log_vol_idio,
            factor_sv,
            idio_sv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WeightMatrix;
    use nalgebra::DVector;
    use rand::RngExt;
    use rand_chacha::ChaCha12Rng;
    use rand_distr::StandardNormal;

    fn test_dims() -> ModelDims {
        ModelDims {
            regions: 3,
            region_vars: 2,
            national_vars: 1,
            domestic_lags: 1,
            foreign_lags: 1,
            factors: 2,
            periods: 40,
        }
    }

    fn test_data(dims: &ModelDims, scale: f64) -> PanelDataset {
        let mut rng = <ChaCha12Rng as rand::SeedableRng>::seed_from_u64(5);
        let regions = (0..dims.regions)
            .map(|i| {
                DMatrix::from_fn(dims.periods, dims.region_vars, |_, _| {
                    scale * (i as f64 + 1.0) * rng.sample::<f64, _>(StandardNormal)
                })
            })
            .collect();
        let national = DMatrix::from_fn(dims.periods, dims.national_vars, |_, _| {
            scale * rng.sample::<f64, _>(StandardNormal)
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

    #[test]
    fn initial_state_has_documented_shape() {
        let dims = test_dims();
        let data = test_data(&dims, 1.0);
        let state = ParameterState::initial(&data, &dims, 9, false).unwrap();

        assert_eq!(state.regions.len(), 3);
        assert_eq!(state.hierarchy.mean, DVector::zeros(dims.region_coef_len()));
        assert!(state.hierarchy.variances.iter().all(|&v| v == 1.0));
        assert!(state.national.intercept.is_none());
        assert_eq!(state.loadings, DMatrix::zeros(7, 2));
        assert_eq!(state.factors.nrows(), dims.effective_periods());
        assert_eq!(state.log_vol_factors, DMatrix::zeros(39, 2));
        assert_eq!(state.log_vol_idio.nrows(), 39);
        assert_eq!(state.idio_sv.len(), 7);
        for p in &state.idio_sv {
            assert_eq!(p.persistence, 0.9);
            assert_eq!(p.innovation_var, 0.1);
        }
        // Factors start as draws, not zeros.
        assert!(state.factors.iter().any(|&f| f != 0.0));

        let with = ParameterState::initial(&data, &dims, 9, true).unwrap();
        assert!(with.national.intercept.is_some());
    }

    #[test]
    fn idio_levels_track_sample_variance() {
        let dims = test_dims();
        let loud = test_data(&dims, 10.0);
        let quiet = test_data(&dims, 0.1);
        let s_loud = ParameterState::initial(&loud, &dims, 9, false).unwrap();
        let s_quiet = ParameterState::initial(&quiet, &dims, 9, false).unwrap();
        for r in 0..7 {
            assert!(
                s_loud.idio_sv[r].level > s_quiet.idio_sv[r].level,
                "series {r}: louder data must start at a higher volatility level"
            );
            // Constant path at the level, for every period.
            for t in 0..dims.effective_periods() {
                assert_eq!(s_loud.log_vol_idio[(t, r)], s_loud.idio_sv[r].level);
            }
        }
        // 100x the scale means 10_000x the variance: levels differ by ln(1e4).
        let gap = s_loud.idio_sv[0].level - s_quiet.idio_sv[0].level;
        assert!((gap - (1.0e4f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn initial_state_is_deterministic_in_the_seed() {
        let dims = test_dims();
        let data = test_data(&dims, 1.0);
        let a = ParameterState::initial(&data, &dims, 42, false).unwrap();
        let b = ParameterState::initial(&data, &dims, 42, false).unwrap();
        let c = ParameterState::initial(&data, &dims, 43, false).unwrap();
        assert_eq!(a.factors, b.factors);
        assert_ne!(a.factors, c.factors);
        // Weight matrix unused here but keep the import exercised.
        let _ = WeightMatrix::uniform(2).unwrap();
    }
}
