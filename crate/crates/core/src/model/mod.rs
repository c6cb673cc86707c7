//! Model structure: dimensions, panel data, coefficient blocks, spatial
//! weighting, regression designs, and the stacked cross-section system.

mod averages;
mod coeffs;
mod covariance;
mod dataset;
mod design;
mod dims;
mod global;
mod residuals;
mod weights;

pub use averages::{foreign_averages, national_cross_averages};
pub use coeffs::{HierarchyParams, NationalCoefficients, RegionCoefficients};
pub use covariance::assemble_shock_covariance;
pub use dataset::{PanelDataset, TransformRecord};
pub use design::{national_design, region_design, region_design_with_averages, BlockDesign};
pub use dims::ModelDims;
pub use global::{stack_global_system, GlobalSystem};
pub use residuals::{national_residuals, region_residuals};
pub use weights::WeightMatrix;
