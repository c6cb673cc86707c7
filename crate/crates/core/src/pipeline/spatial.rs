use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::WeightMatrix;

/// How centroid coordinates are to be interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceConvention {
    /// (x, y) in a common planar projection; Euclidean distance.
    Planar,
    /// (longitude, latitude) in degrees; great-circle distance.
    Spherical,
}

/// Region centroids in a declared coordinate convention.
#[derive(Clone, Debug, PartialEq)]
pub struct Centroids {
    pub names: Vec<String>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub convention: DistanceConvention,
}

impl Centroids {
    pub fn new(
        names: Vec<String>,
        x: Vec<f64>,
        y: Vec<f64>,
        convention: DistanceConvention,
    ) -> Result<Self> {
        if names.len() != x.len() || names.len() != y.len() {
            return Err(Error::config(format!(
                "{} names, {} x, {} y coordinates",
                names.len(),
                x.len(),
                y.len()
            )));
        }
        for (i, (a, b)) in x.iter().zip(&y).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::config(format!(
                    "centroid for {} is not finite",
                    names[i]
                )));
            }
        }
        if convention == DistanceConvention::Spherical {
            for (i, &lat) in y.iter().enumerate() {
                if !(-90.0..=90.0).contains(&lat) {
                    return Err(Error::config(format!(
                        "latitude for {} is {lat}; must lie in [-90, 90]",
                        names[i]
                    )));
                }
            }
        }
        Ok(Centroids {
            names,
            x,
            y,
            convention,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        match self.convention {
            DistanceConvention::Planar => {
                ((self.x[i] - self.x[j]).powi(2) + (self.y[i] - self.y[j]).powi(2)).sqrt()
            }
            DistanceConvention::Spherical => {
                great_circle(self.x[i], self.y[i], self.x[j], self.y[j])
            }
        }
    }
}

/// Great-circle distance on the unit sphere (haversine); inputs in degrees.
/// The sphere radius cancels under row normalization, so none is applied.
fn great_circle(lon1: f64, lat1: f64, lon2: f64, lat2: f64) -> f64 {
    let (phi1, phi2) = (lat1.to_radians(), lat2.to_radians());
    let dphi = phi2 - phi1;
    let dlambda = (lon2 - lon1).to_radians();
    let a = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * a.sqrt().min(1.0).asin()
}

/// Row-normalized inverse-distance weights: `w̃_ij = 1/d(i,j)` off the
/// diagonal, zero on it, each row scaled to sum to one.
pub fn inverse_distance_weights(centroids: &Centroids) -> Result<WeightMatrix> {
    let n = centroids.len();
    if n < 2 {
        return Err(Error::config(format!(
            "need at least 2 regions for spatial weights, got {n}"
        )));
    }
    let mut raw = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = centroids.distance(i, j);
            if d <= 0.0 {
                return Err(Error::config(format!(
                    "regions {} and {} have coincident centroids",
                    centroids.names[i], centroids.names[j]
                )));
            }
            raw[(i, j)] = 1.0 / d;
            raw[(j, i)] = 1.0 / d;
        }
    }
    for i in 0..n {
        let row_sum: f64 = raw.row(i).sum();
        for j in 0..n {
            raw[(i, j)] /= row_sum;
        }
    }
    WeightMatrix::new(raw)
}
