use serde::Serialize;

use crate::clustering::{brute_force_optimal, ProblemSpec};
use crate::error::Result;
use crate::geometry::PointSet;
use crate::projection::ProjectionMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PreservationReport {
    pub spec: ProblemSpec,
    pub epsilon: f64,
    pub source_dim: usize,
    pub target_dim: usize,
    /// Exact optimum on the input.
    pub source_value: f64,
    /// Exact optimum on the projected input.
    pub image_value: f64,
    /// `image_value / source_value`; 1 when both vanish.
    pub ratio: f64,
    pub pass: bool,
}

/// Compares exact optima before and after projection.
///
/// Passes when `(1−ε) f ≤ f' ≤ (1+ε) f`.
pub fn verify_objective_preservation(
    points: &PointSet,
    map: &ProjectionMap,
    spec: ProblemSpec,
    epsilon: f64,
) -> Result<PreservationReport> {
    let source_value = brute_force_optimal(points, spec)?.value;
    let image = map.project(points)?;
    let image_value = brute_force_optimal(&image, spec)?.value;
    let ratio = match (source_value == 0.0, image_value == 0.0) {
        (true, true) => 1.0,
        (true, false) => f64::INFINITY,
        _ => image_value / source_value,
    };
    Ok(PreservationReport {
        spec,
        epsilon,
        source_dim: map.source_dim(),
        target_dim: map.target_dim(),
        source_value,
        image_value,
        ratio,
        pass: (1.0 - epsilon) * source_value <= image_value && image_value <= (1.0 + epsilon) * source_value,
    })
}
