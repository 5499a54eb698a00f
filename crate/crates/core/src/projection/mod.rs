//! Random scaled orthogonal projections, target dimensions, and distortion checks.

mod dimension;
mod map;
mod verify;

pub use dimension::{
    flat_distance_dimension, jl_dimension, projective_dimension, subspace_dimension, DimensionBudget,
    DEFAULT_CORESET_CONSTANT, DEFAULT_LAMBDA,
};
pub use map::{make_projection, project, ProjectionMap, FILE_MAGIC, FILE_VERSION};
pub use verify::{
    gaussian_points, uniform_points, verify_flat_distance_distortion, verify_pairwise_distortion,
    verify_subspace_distortion, FlatCheck, FlatReport, PairwiseReport, RatioRange, SubspaceCheck, SubspaceReport,
};
