use serde::Serialize;

use crate::cech::{build_cech_with_budget, FilteredComplex, DEFAULT_BUDGET};
use crate::error::{invalid, Result};
use crate::geometry::{Norm, PointSet};
use crate::projection::{DimensionBudget, ProjectionMap};

pub const DEFAULT_C_SLACK: f64 = 2.0;
/// Violations listed in a report; the count covers all of them.
const MAX_LISTED: usize = 20;

/// Target dimension for the sandwich: the projective dimension with q = 0
/// and rho = ∞, capped at `d`.
pub fn sandwich_dimension(n: usize, d: usize, epsilon: f64, lambda: f64, coreset_constant: f64) -> Result<usize> {
    Ok(DimensionBudget::new(n, 0, epsilon, Norm::Infinity)?.with_constants(lambda, coreset_constant)?.clamped(d))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub vertices: Vec<usize>,
    pub source_radius: f64,
    pub image_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub s_max: usize,
    pub epsilon: f64,
    pub c_slack: f64,
    pub source_dim: usize,
    pub target_dim: usize,
    pub seed: u64,
    pub simplices: usize,
    /// Smallest and largest `r_image / r_source` over simplices with positive
    /// source radius.
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// Simplices outside `[(1 − cε) r, (1 + cε) r]`.
    pub violations: usize,
    pub listed: Vec<Violation>,
    /// The band holds for every simplex.
    pub pass: bool,
    /// `C_{(1−cε)α}(P) ⊆ C_α(π̂P) ⊆ C_{(1+cε)α}(P)` for every α, that is
    /// `r/(1+cε) ≤ r' ≤ r/(1−cε)` per simplex. Neither this nor `pass`
    /// implies the other.
    pub inclusions_hold: bool,
}

/// Compares the filtration of `points` with that of their image, simplex by
/// simplex.
///
/// Requires `c_slack > 1` and `0 < ε ≤ (c_slack − 1)/c_slack`.
pub fn verify_sandwich(
    points: &PointSet,
    map: &ProjectionMap,
    s_max: usize,
    epsilon: f64,
    c_slack: f64,
) -> Result<SandwichReport> {
    if !(c_slack > 1.0 && c_slack.is_finite()) {
        return Err(invalid(format!("c_slack must exceed 1, got {c_slack}")));
    }
    if !(epsilon > 0.0 && epsilon <= (c_slack - 1.0) / c_slack) {
        return Err(invalid(format!("epsilon must lie in (0, (c-1)/c] = (0, {}], got {epsilon}", (c_slack - 1.0) / c_slack)));
    }
    let source = build_cech_with_budget(points, s_max, DEFAULT_BUDGET)?;
    let image = build_cech_with_budget(&map.project(points)?, s_max, DEFAULT_BUDGET)?;
    let ce = c_slack * epsilon;

    let (mut ratio_min, mut ratio_max) = (f64::INFINITY, 0.0_f64);
    let mut violations = 0;
    let mut listed = Vec::new();
    for (a, b) in source.simplices.iter().zip(&image.simplices) {
        if a.radius > 0.0 {
            let r = b.radius / a.radius;
            ratio_min = ratio_min.min(r);
            ratio_max = ratio_max.max(r);
        }
        if !((1.0 - ce) * a.radius <= b.radius && b.radius <= (1.0 + ce) * a.radius) {
            violations += 1;
            if listed.len() < MAX_LISTED {
                listed.push(Violation { vertices: a.vertices.clone(), source_radius: a.radius, image_radius: b.radius });
            }
        }
    }
    if ratio_min > ratio_max {
        (ratio_min, ratio_max) = (1.0, 1.0);
    }
    Ok(SandwichReport {
        n: points.len(),
        s_max,
        epsilon,
        c_slack,
        source_dim: map.source_dim(),
        target_dim: map.target_dim(),
        seed: map.seed(),
        simplices: source.len(),
        ratio_min,
        ratio_max,
        violations,
        listed,
        pass: violations == 0,
        inclusions_hold: filtration_inclusions_hold(&source, &image, ce),
    })
}

/// Checks `C_{(1−t)α}(P) ⊆ C_α(Q) ⊆ C_{(1+t)α}(P)` as set inclusions at
/// every α where either side can change.
///
/// The complexes must list the same simplices in the same order.
pub fn filtration_inclusions_hold(source: &FilteredComplex, image: &FilteredComplex, t: f64) -> bool {
    assert_eq!(source.len(), image.len(), "complexes over different simplex sets");
    let mut alphas: Vec<f64> = Vec::with_capacity(3 * source.len());
    for (a, b) in source.simplices.iter().zip(&image.simplices) {
        alphas.push(b.radius);
        alphas.push(a.radius / (1.0 - t));
        alphas.push(a.radius / (1.0 + t));
    }
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    // each membership test is monotone in α, so a violation shows up as
    // overlapping index ranges of the sorted critical values
    let first = |pred: &dyn Fn(f64) -> bool| alphas.partition_point(|&alpha| !pred(alpha));
    source.simplices.iter().zip(&image.simplices).all(|(a, b)| {
        let lower_from = first(&|alpha| a.radius <= (1.0 - t) * alpha);
        let mid_from = first(&|alpha| b.radius <= alpha);
        let upper_from = first(&|alpha| a.radius <= (1.0 + t) * alpha);
        lower_from >= mid_from && mid_from >= upper_from
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::{build_cech, Simplex};
    use crate::projection::gaussian_points;

    #[test]
    fn identity_map_is_exact() {
        let p = gaussian_points(8, 5, 0, 0);
        let r = verify_sandwich(&p, &ProjectionMap::new(5, 5, 0).unwrap(), 3, 0.4, 2.0).unwrap();
        assert!(r.pass && r.inclusions_hold);
        assert_eq!((r.ratio_min, r.ratio_max), (1.0, 1.0));
    }

    #[test]
    fn epsilon_range() {
        let p = gaussian_points(5, 4, 0, 0);
        let map = ProjectionMap::new(4, 4, 0).unwrap();
        assert!(verify_sandwich(&p, &map, 2, 0.5, 2.0).is_ok());
        assert!(verify_sandwich(&p, &map, 2, 0.51, 2.0).is_err());
        assert!(verify_sandwich(&p, &map, 2, 0.1, 1.0).is_err());
    }

    #[test]
    fn too_few_dimensions_fail() {
        let p = gaussian_points(30, 60, 1, 0);
        let r = verify_sandwich(&p, &ProjectionMap::new(60, 2, 3).unwrap(), 3, 0.4, 2.0).unwrap();
        assert!(!r.pass);
        assert!(r.violations >= r.listed.len() && !r.listed.is_empty());
    }

    /// Per-simplex form of the inclusions: `r/(1+t) ≤ r' ≤ r/(1−t)`.
    fn inclusion_band(source: &FilteredComplex, image: &FilteredComplex, t: f64) -> bool {
        source.simplices.iter().zip(&image.simplices).all(|(a, b)| a.radius <= (1.0 + t) * b.radius && (1.0 - t) * b.radius <= a.radius)
    }

    fn band(source: &FilteredComplex, image: &FilteredComplex, t: f64) -> bool {
        source.simplices.iter().zip(&image.simplices).all(|(a, b)| (1.0 - t) * a.radius <= b.radius && b.radius <= (1.0 + t) * a.radius)
    }

    #[test]
    fn literal_inclusions_match_their_band() {
        let mut seen = [0usize; 2];
        for seed in 0..40 {
            let p = gaussian_points(9, 12, seed, 0);
            let m = 2 + (seed as usize % 6);
            let source = build_cech(&p, 2).unwrap();
            let image = build_cech(&ProjectionMap::new(12, m, seed).unwrap().project(&p).unwrap(), 2).unwrap();
            for t in [0.2, 0.4, 0.6] {
                let lit = filtration_inclusions_hold(&source, &image, t);
                assert_eq!(lit, inclusion_band(&source, &image, t), "seed {seed} t {t}");
                if band(&source, &image, t / (1.0 + t)) {
                    assert!(lit);
                }
                if lit {
                    assert!(band(&source, &image, t / (1.0 - t)));
                }
                seen[lit as usize] += 1;
            }
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn ratio_band_and_inclusions_differ() {
        let mk = |r: &[f64]| FilteredComplex {
            n: r.len(),
            s_max: 1,
            simplices: r.iter().enumerate().map(|(i, &radius)| Simplex { vertices: vec![i], radius }).collect(),
        };
        let source = mk(&[1.0]);
        // t = 0.5: band [0.5, 1.5], inclusions [0.667, 2]
        assert!(band(&source, &mk(&[0.6]), 0.5) && !filtration_inclusions_hold(&source, &mk(&[0.6]), 0.5));
        assert!(!band(&source, &mk(&[1.8]), 0.5) && filtration_inclusions_hold(&source, &mk(&[1.8]), 0.5));
    }

    #[test]
    fn inclusions_on_handmade_complexes() {
        let mk = |r: &[f64]| FilteredComplex {
            n: r.len(),
            s_max: 1,
            simplices: r.iter().enumerate().map(|(i, &radius)| Simplex { vertices: vec![i], radius }).collect(),
        };
        let source = mk(&[0.0, 1.0]);
        // 1/(1+0.5) = 0.667 ≤ r' ≤ 1/(1-0.5) = 2
        assert!(filtration_inclusions_hold(&source, &mk(&[0.0, 0.7]), 0.5));
        assert!(filtration_inclusions_hold(&source, &mk(&[0.0, 1.9]), 0.5));
        assert!(!filtration_inclusions_hold(&source, &mk(&[0.0, 0.6]), 0.5));
        assert!(!filtration_inclusions_hold(&source, &mk(&[0.0, 2.1]), 0.5));
        assert!(!filtration_inclusions_hold(&source, &mk(&[0.1, 1.0]), 0.5));
    }

    #[test]
    fn projected_sandwich_mostly_passes() {
        let (n, d, eps) = (30, 400, 0.4);
        let p = gaussian_points(n, d, 2, 0);
        let m = sandwich_dimension(n, d, eps, 1.0, 1.0).unwrap();
        assert!(m < d);
        let passes = (0..10).filter(|&s| verify_sandwich(&p, &ProjectionMap::new(d, m, s).unwrap(), 2, eps, 2.0).unwrap().pass).count();
        assert!(passes >= 9, "{passes}/10");
    }
}
