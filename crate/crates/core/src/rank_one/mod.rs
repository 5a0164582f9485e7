//! Rank-one model: the hyperbolic disk with its Busemann function,
//! spherical functions, horocycle and Abel transforms, and the map `T`.

mod convolve;
mod diagram;
mod distribution;
mod functions;
mod jet;
mod model;
mod transforms;

pub use convolve::{
    geometric_convolve, radial_convolve, spherical_inverse, AtomicConvolution, InversionConfig,
};
pub use diagram::{
    check_diagram, check_dual_diagram, check_duality, dual_diagram_samples, projection_slice,
    radon_b_spread, radon_intertwining, DiagramReport, DiagramSample, ProjectionSliceRow,
    RadonReport, RadonRow,
};
pub use distribution::{LineAtom, LineDensity, LineDistribution, RadialAtom, RadialDistribution};
pub use functions::{
    abel_by_horocycle, CoshGaussian, Cosine, LineBump, LineFunction, RadialBump, RadialFunction,
    RadialProfile, SampledRadial,
};
pub use jet::Jet;
pub use model::{
    boundary_point, busemann, busemann_radial, disk_point, distance_from_origin,
    plancherel_density, spherical_function, Horocycle, RHO,
};
pub use transforms::{
    abel_transform, dual_transform, pair_with_t, radial_laplacian_fd, radon_transform,
    spherical_ft, t_map, t_map_with, tabulate, SphericalTransform, STRIP,
};
