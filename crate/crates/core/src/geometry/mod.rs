//! Points, flats, distances, spans, enclosing balls and best-fit flats.

mod fit;
mod flat;
mod meb;
mod point_set;

pub use fit::{best_fit_flat_l2, best_fit_flat_weighted, span_basis};
pub use flat::{aggregate, center_objective, nearest_flat, objective, point_to_flat_distance, QFlat, BASIS_TOL};
pub use meb::{meb, meb_of, try_meb_of, Ball, ENUMERATION_MAX_POINTS, WELZL_MAX_DIM};
pub use point_set::{Norm, PointSet};

/// Distance from `x` to the affine hull of `points`.
pub fn affine_hull_residual(points: &[&[f64]], x: &[f64]) -> f64 {
    crate::linalg::affine_hull_residual(points, x)
}
