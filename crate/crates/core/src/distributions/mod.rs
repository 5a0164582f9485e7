//! Compactly supported distributions on ℝⁿ: atomic sums of derivatives of
//! point masses and gridded densities.

mod gridded;
mod hull;
mod point_mass;
mod sobolev;

pub(crate) use gridded::fft_nd;
pub use gridded::{GriddedDensity, SUPPORT_TOL};

pub use hull::ConvexHull;
pub use point_mass::{Atom, PointMassDistribution};
pub use sobolev::{
    check_sup_bound, sobolev_norm, sup_laplacian_power, sup_norm_constant, SobolevNorm,
    SupBoundCheck,
};
