use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::GlobalSystem;
use crate::structural::irf::propagate;

/// Forecast-error-variance decomposition across all orthogonal shocks.
#[derive(Clone, Debug, PartialEq)]
pub struct Fevd {
    /// One `(H+1) × L` matrix per shock: entry `(h, v)` is the share of
    /// variable `v`'s `h`-step forecast-error variance attributed to that
    /// shock. At every `(h, v)` the shares sum to one across shocks, except
    /// where the total variance is zero (those cells are reported as 0).
    pub shares: Vec<DMatrix<f64>>,
    /// Set when some cell had zero total forecast-error variance.
    pub warning: Option<String>,
}

/// Orthogonalized FEVD: cumulate squared impulse responses per shock and
/// normalize by the total over shocks at each (variable, horizon) cell.
/// `impacts` holds one impact column per shock, in original variable order
/// (see [`impact_columns`](crate::structural::impact_columns)), so the
/// column outer products reassemble the one-step shock covariance.
pub fn fevd(system: &GlobalSystem, impacts: &DMatrix<f64>, horizon: usize) -> Result<Fevd> {
    let l = system.dim();
    if impacts.nrows() != l || impacts.ncols() != l {
        return Err(Error::config(format!(
            "impact matrix must be {l}x{l}, got {}x{}",
            impacts.nrows(),
            impacts.ncols()
        )));
    }
    let irfs: Vec<DMatrix<f64>> = (0..l)
        .map(|s| propagate(system, &impacts.column(s).into_owned(), horizon))
        .collect();

    let mut shares = vec![DMatrix::zeros(horizon + 1, l); l];
    let mut zero_cells = 0usize;
    let mut cumulated = vec![0.0; l];
    for v in 0..l {
        cumulated.fill(0.0);
        for h in 0..=horizon {
            for (s, irf) in irfs.iter().enumerate() {
                let r = irf[(h, v)];
                cumulated[s] += r * r;
            }
            let total: f64 = cumulated.iter().sum();
            if total == 0.0 {
                zero_cells += 1;
            } else {
                for s in 0..l {
                    shares[s][(h, v)] = cumulated[s] / total;
                }
            }
        }
    }
    let warning = (zero_cells > 0).then(|| {
        format!("{zero_cells} cells had zero forecast-error variance; their shares are reported as 0")
    });
    Ok(Fevd { shares, warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structural::{identify_cholesky, impact_columns};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use rand_distr::StandardNormal;

    fn static_system(l: usize) -> GlobalSystem {
        GlobalSystem {
            transition: vec![DMatrix::zeros(l, l)],
            intercept: DVector::zeros(l),
        }
    }

    #[test]
    fn diagonal_covariance_without_dynamics_is_an_identity_decomposition() {
        let sys = static_system(3);
        let impacts = DMatrix::from_diagonal(&DVector::from_row_slice(&[1.0, 2.0, 0.3]));
        let out = fevd(&sys, &impacts, 5).unwrap();
        assert!(out.warning.is_none());
        for v in 0..3 {
            for s in 0..3 {
                for h in 0..=5 {
                    let want = if s == v { 1.0 } else { 0.0 };
                    assert_eq!(out.shares[s][(h, v)], want);
                }
            }
        }
    }

    /// Hand-worked bivariate case: the factor of [[4,2],[2,5]] is
    /// [[2,0],[1,2]], so variable 1's forecast error splits 1² against 2²
    /// across the two shocks — a 0.2 share for shock 0 at every horizon.
    #[test]
    fn hand_worked_share_of_the_first_shock() {
        let sys = static_system(2);
        let impacts = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 1.0, 2.0]);
        let out = fevd(&sys, &impacts, 4).unwrap();
        for h in 0..=4 {
            assert_abs_diff_eq!(out.shares[0][(h, 1)], 0.2, epsilon = 1e-14);
            assert_abs_diff_eq!(out.shares[1][(h, 1)], 0.8, epsilon = 1e-14);
            // Variable 0 loads on shock 0 alone (triangular impact).
            assert_eq!(out.shares[0][(h, 0)], 1.0);
            assert_eq!(out.shares[1][(h, 0)], 0.0);
        }
    }

    #[test]
    fn shares_lie_in_the_simplex_on_random_systems() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..10 {
            let l = 5;
            let mut sys = GlobalSystem {
                transition: (0..2)
                    .map(|_| DMatrix::from_fn(l, l, |_, _| rng.random_range(-0.5..0.5)))
                    .collect(),
                intercept: DVector::zeros(l),
            };
            while sys.spectral_radius() >= 0.95 {
                for mat in sys.transition.iter_mut() {
                    *mat *= 0.9;
                }
            }
            let a = DMatrix::from_fn(l, l, |_, _| rng.sample::<f64, _>(StandardNormal));
            let theta = &a * a.transpose() + DMatrix::identity(l, l) * 0.3;
            let ordering: Vec<usize> = (0..l).collect();
            let chol = identify_cholesky(&theta, &ordering).unwrap();
            let impacts = impact_columns(&chol, &ordering);

            let out = fevd(&sys, &impacts, 12).unwrap();
            assert!(out.warning.is_none());
            for v in 0..l {
                for h in 0..=12 {
                    let mut total = 0.0;
                    for s in 0..l {
                        let share = out.shares[s][(h, v)];
                        assert!((0.0..=1.0 + 1e-12).contains(&share));
                        total += share;
                    }
                    assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn zero_variance_cells_report_zero_with_a_warning() {
        // Variable 1 receives no impact from any shock and has no dynamics:
        // its forecast-error variance is identically zero.
        let sys = static_system(2);
        let impacts = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let out = fevd(&sys, &impacts, 3).unwrap();
        let warning = out.warning.expect("zero-variance cells must be flagged");
        assert!(warning.contains("zero forecast-error variance"), "got: {warning}");
        for h in 0..=3 {
            assert_eq!(out.shares[0][(h, 1)], 0.0);
            assert_eq!(out.shares[1][(h, 1)], 0.0);
            // The healthy variable still decomposes to one.
            assert_eq!(out.shares[0][(h, 0)], 1.0);
        }
    }

    #[test]
    fn wrong_impact_shape_is_rejected() {
        let sys = static_system(2);
        let err = fevd(&sys, &DMatrix::zeros(2, 3), 3).unwrap_err();
        assert!(err.to_string().contains("impact matrix"));
    }
}
