use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::GlobalSystem;

/// Companion spectral radius beyond which responses are annotated as
/// explosive. Draws slightly past the unit circle still produce usable
/// short-horizon responses, so this is a warning, not a failure.
pub const EXPLOSIVE_RADIUS: f64 = 1.2;

/// Responses of every stacked variable to one impact vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ImpulseResponses {
    /// `(H+1) × L`: row `h` holds the horizon-`h` response of each variable.
    pub responses: DMatrix<f64>,
    /// Set when the companion spectral radius exceeds [`EXPLOSIVE_RADIUS`].
    pub warning: Option<String>,
}

/// Iterate the lag polynomial on an impact vector. Row 0 is the impact
/// itself and row `h` is `Σ_{g=1..min(h,lags)} G_g · row_{h−g}`: the
/// system's own dynamics with intercepts excluded, so every row is a
/// deviation from the no-shock baseline.
pub(crate) fn propagate(
    system: &GlobalSystem,
    impact: &DVector<f64>,
    horizon: usize,
) -> DMatrix<f64> {
    let l = system.dim();
    let mut out = DMatrix::zeros(horizon + 1, l);
    out.row_mut(0).copy_from(&impact.transpose());
    let mut next = DVector::zeros(l);
    for h in 1..=horizon {
        next.fill(0.0);
        for (g, mat) in system.transition.iter().enumerate() {
            if g + 1 > h {
                break;
            }
            let prev: DVector<f64> = out.row(h - g - 1).transpose();
            next.gemv(1.0, mat, &prev, 1.0);
        }
        out.row_mut(h).copy_from(&next.transpose());
    }
    out
}

/// Impulse responses of the stacked system to `impact` (original variable
/// order) at horizons `0..=horizon`. Explosive systems — companion spectral
/// radius above [`EXPLOSIVE_RADIUS`] — are computed anyway and annotated.
pub fn impulse_response(
    system: &GlobalSystem,
    impact: &DVector<f64>,
    horizon: usize,
) -> Result<ImpulseResponses> {
    if impact.len() != system.dim() {
        return Err(Error::config(format!(
            "impact vector has {} entries, system dimension is {}",
            impact.len(),
            system.dim()
        )));
    }
    let responses = propagate(system, impact, horizon);
    let radius = system.spectral_radius();
    let warning = (radius > EXPLOSIVE_RADIUS).then(|| {
        format!(
            "companion spectral radius {radius:.4} exceeds {EXPLOSIVE_RADIUS}; \
             responses grow with the horizon"
        )
    });
    Ok(ImpulseResponses { responses, warning })
}
