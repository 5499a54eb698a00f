//! Empirical distortion checks for a projection map.
//!
//! Sampling-based: subsets, span vectors and flats are drawn from
//! [`rng::stream`](crate::rng::stream) with one stream per trial, trials run in
//! parallel, and results are merged in trial order.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, invalid, Result};
use crate::geometry::{PointSet, QFlat};
use crate::linalg;
use crate::projection::ProjectionMap;
use crate::rng::{self, Purpose};

/// Running min/max of distortion ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for RatioRange {
    fn default() -> Self {
        Self { min: f64::INFINITY, max: f64::NEG_INFINITY, count: 0 }
    }
}

impl RatioRange {
    pub fn push(&mut self, r: f64) {
        self.min = self.min.min(r);
        self.max = self.max.max(r);
        self.count += 1;
    }

    pub fn merge(self, other: Self) -> Self {
        Self { min: self.min.min(other.min), max: self.max.max(other.max), count: self.count + other.count }
    }

    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.count == 0 || (self.min >= lo && self.max <= hi)
    }

    /// `max(max - 1, 0)`.
    pub fn expansion(&self) -> f64 {
        if self.count == 0 { 0.0 } else { (self.max - 1.0).max(0.0) }
    }

    /// `max(1 - min, 0)`.
    pub fn contraction(&self) -> f64 {
        if self.count == 0 { 0.0 } else { (1.0 - self.min).max(0.0) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairwiseReport {
    pub epsilon: f64,
    pub source_dim: usize,
    pub target_dim: usize,
    pub pairs_checked: usize,
    /// Pairs at zero distance, which carry no ratio.
    pub pairs_skipped: usize,
    /// Range of squared-distance ratios.
    pub ratios: RatioRange,
    pub max_expansion: f64,
    pub max_contraction: f64,
    pub pass: bool,
}

/// Checks `(1-ε)|u-v|² <= |π(u)-π(v)|² <= (1+ε)|u-v|²` over all pairs.
pub fn verify_pairwise_distortion(points: &PointSet, map: &ProjectionMap, epsilon: f64) -> Result<PairwiseReport> {
    let image = map.project(points)?;
    let n = points.len();
    let per_row: Vec<(RatioRange, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut range = RatioRange::default();
            let mut skipped = 0;
            for j in i + 1..n {
                let orig = linalg::dist_sq(points.point(i), points.point(j));
                if orig == 0.0 {
                    skipped += 1;
                    continue;
                }
                range.push(linalg::dist_sq(image.point(i), image.point(j)) / orig);
            }
            (range, skipped)
        })
        .collect();
    let (ratios, skipped) =
        per_row.into_iter().fold((RatioRange::default(), 0), |(r, s), (r2, s2)| (r.merge(r2), s + s2));
    Ok(PairwiseReport {
        epsilon,
        source_dim: map.source_dim(),
        target_dim: map.target_dim(),
        pairs_checked: ratios.count,
        pairs_skipped: skipped,
        max_expansion: ratios.expansion(),
        max_contraction: ratios.contraction(),
        pass: ratios.within(1.0 - epsilon, 1.0 + epsilon),
        ratios,
    })
}

/// Parameters of a sampled subspace check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SubspaceCheck {
    /// Subset size.
    pub c: usize,
    pub epsilon: f64,
    /// Number of sampled subsets.
    pub trials: usize,
    /// Vector pairs drawn from each subset's span.
    pub pairs_per_trial: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubspaceReport {
    pub check: SubspaceCheck,
    pub target_dim: usize,
    /// Range of `|π(u)-π(v)| / |u-v|`.
    pub ratios: RatioRange,
    pub pass: bool,
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, c: usize) -> Vec<usize> {
    let mut s = sample(rng, n, c).into_vec();
    s.sort_unstable();
    s
}

fn random_combination(rng: &mut ChaCha8Rng, points: &PointSet, subset: &[usize]) -> Vec<f64> {
    let mut v = vec![0.0; points.dim()];
    for &i in subset {
        let a: f64 = StandardNormal.sample(rng);
        linalg::axpy(a, points.point(i), &mut v);
    }
    v
}

/// Samples subsets S of size c and vector pairs u, v in the linear span of S;
/// passes when every `|π(u)-π(v)| / |u-v|` lies in `[1-ε, 1+ε]`.
pub fn verify_subspace_distortion(points: &PointSet, map: &ProjectionMap, check: SubspaceCheck) -> Result<SubspaceReport> {
    check_dim(map.source_dim(), points.dim())?;
    if check.c == 0 || check.c > points.len() {
        return Err(invalid(format!("subset size {} must be in 1..={}", check.c, points.len())));
    }
    let per_trial: Vec<RatioRange> = (0..check.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(check.seed, Purpose::Subsets, t as u64);
            let subset = random_subset(&mut rng, points.len(), check.c);
            let mut range = RatioRange::default();
            for _ in 0..check.pairs_per_trial {
                let u = random_combination(&mut rng, points, &subset);
                let v = random_combination(&mut rng, points, &subset);
                let orig = linalg::dist(&u, &v);
                if orig == 0.0 {
                    continue;
                }
                let pu = map.apply(&u).expect("dimension checked");
                let pv = map.apply(&v).expect("dimension checked");
                range.push(linalg::dist(&pu, &pv) / orig);
            }
            range
        })
        .collect();
    let ratios = per_trial.into_iter().fold(RatioRange::default(), RatioRange::merge);
    Ok(SubspaceReport {
        pass: ratios.within(1.0 - check.epsilon, 1.0 + check.epsilon),
        target_dim: map.target_dim(),
        check,
        ratios,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FlatCheck {
    pub c: usize,
    pub q: usize,
    pub epsilon: f64,
    /// Number of sampled flats (one subset each).
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatReport {
    pub check: FlatCheck,
    pub target_dim: usize,
    /// Range of `d(π(p), π(Q)) / d(p, Q)` over points off the flat.
    pub ratios: RatioRange,
    /// Point-flat pairs at zero distance.
    pub zero_distance: usize,
    /// Zero-distance pairs whose image distance was not zero (within 1e-9 relative).
    pub zero_violations: usize,
    pub pass: bool,
}

/// A random q-flat inside the linear span of `subset`.
pub(crate) fn random_flat_in_span(rng: &mut ChaCha8Rng, points: &PointSet, subset: &[usize], q: usize) -> QFlat {
    let anchor = random_combination(rng, points, subset);
    let dirs: Vec<Vec<f64>> = (0..q).map(|_| random_combination(rng, points, subset)).collect();
    QFlat::from_directions(anchor, &dirs).expect("dimensions agree")
}

/// Samples c-subsets S, a random q-flat Q in span(S) for each, and compares
/// `d(p, Q)` with `d(π(p), π(Q))` for every p.
pub fn verify_flat_distance_distortion(points: &PointSet, map: &ProjectionMap, check: FlatCheck) -> Result<FlatReport> {
    check_dim(map.source_dim(), points.dim())?;
    if !(check.q < check.c && check.c <= points.len()) {
        return Err(invalid(format!("need q < c <= n, got q={} c={} n={}", check.q, check.c, points.len())));
    }
    let image = map.project(points)?;
    let per_trial: Vec<(RatioRange, usize, usize)> = (0..check.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(check.seed, Purpose::Subsets, t as u64);
            let subset = random_subset(&mut rng, points.len(), check.c);
            let flat = random_flat_in_span(&mut rng, points, &subset, check.q);
            let image_flat = map.project_flat(&flat).expect("dimension checked");
            let mut range = RatioRange::default();
            let (mut zeros, mut bad) = (0, 0);
            for (p, pp) in points.iter().zip(image.iter()) {
                let orig = flat.distance_unchecked(p);
                let proj = image_flat.distance_unchecked(pp);
                let scale = linalg::dist(p, flat.anchor()).max(f64::MIN_POSITIVE) * map.scale();
                if orig <= 1e-12 * scale {
                    zeros += 1;
                    if proj > 1e-9 * scale {
                        bad += 1;
                    }
                    continue;
                }
                range.push(proj / orig);
            }
            (range, zeros, bad)
        })
        .collect();
    let (ratios, zero_distance, zero_violations) = per_trial
        .into_iter()
        .fold((RatioRange::default(), 0, 0), |(r, z, b), (r2, z2, b2)| (r.merge(r2), z + z2, b + b2));
    Ok(FlatReport {
        pass: zero_violations == 0 && ratios.within(1.0 - check.epsilon, 1.0 + check.epsilon),
        target_dim: map.target_dim(),
        check,
        ratios,
        zero_distance,
        zero_violations,
    })
}

/// Standard normal points, n x d, from the instance stream `index` of `seed`.
pub fn gaussian_points(n: usize, d: usize, seed: u64, index: u64) -> PointSet {
    let mut rng = rng::stream(seed, Purpose::Instances, index);
    let coords = (0..n * d).map(|_| StandardNormal.sample(&mut rng)).collect();
    PointSet::new(d, coords).expect("n, d >= 1")
}

/// Uniform points in `[-1, 1]^d`.
pub fn uniform_points(n: usize, d: usize, seed: u64, index: u64) -> PointSet {
    let mut rng = rng::stream(seed, Purpose::Instances, index);
    let coords = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    PointSet::new(d, coords).expect("n, d >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::{flat_distance_dimension, jl_dimension, subspace_dimension};

    #[test]
    fn identity_map_has_no_distortion() {
        let p = gaussian_points(20, 8, 1, 0);
        let map = ProjectionMap::new(8, 8, 5).unwrap();
        let r = verify_pairwise_distortion(&p, &map, 0.01).unwrap();
        assert!(r.pass);
        assert_eq!((r.ratios.min, r.ratios.max), (1.0, 1.0));
        assert_eq!(r.max_expansion, 0.0);
        assert_eq!(r.pairs_checked, 190);
    }

    #[test]
    fn duplicate_points_are_skipped() {
        let p = PointSet::from_rows(&[[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [0.0, 0.0, 1.0]]).unwrap();
        let map = ProjectionMap::new(3, 2, 5).unwrap();
        let r = verify_pairwise_distortion(&p, &map, 0.99).unwrap();
        assert_eq!(r.pairs_skipped, 1);
        assert_eq!(r.pairs_checked, 2);
    }

    #[test]
    fn jl_dimension_passes_most_seeds() {
        let p = gaussian_points(60, 400, 9, 0);
        let m = jl_dimension(60, 0.6).unwrap().min(400);
        let passes = (0..10)
            .filter(|&s| verify_pairwise_distortion(&p, &ProjectionMap::new(400, m, s).unwrap(), 0.6).unwrap().pass)
            .count();
        assert!(passes >= 9, "{passes}/10");
    }

    #[test]
    fn single_point_subspace_is_norm_preservation() {
        let p = gaussian_points(5, 50, 2, 0);
        let map = ProjectionMap::new(50, 10, 3).unwrap();
        let check = SubspaceCheck { c: 1, epsilon: 0.99, trials: 5, pairs_per_trial: 3, seed: 4 };
        let r = verify_subspace_distortion(&p, &map, check).unwrap();
        assert_eq!(r.ratios.count, 15);
        // in a one-dimensional span every ratio equals |π(x)|/|x| for the spanning point
        let mut expected: Vec<f64> = (0..5)
            .map(|i| linalg::norm(&map.apply(p.point(i)).unwrap()) / linalg::norm(p.point(i)))
            .collect();
        expected.sort_by(f64::total_cmp);
        assert!(r.ratios.min >= expected[0] - 1e-12 && r.ratios.max <= expected[4] + 1e-12);
    }

    #[test]
    fn subspace_check_at_theory_dimension_passes() {
        let p = gaussian_points(100, 300, 7, 0);
        let m = subspace_dimension(100, 3, 0.3, 1.0).unwrap();
        let map = ProjectionMap::new(300, m, 1).unwrap();
        let check = SubspaceCheck { c: 3, epsilon: 0.3, trials: 100, pairs_per_trial: 10, seed: 2 };
        assert!(verify_subspace_distortion(&p, &map, check).unwrap().pass);
    }

    #[test]
    fn two_dimensions_is_too_few() {
        let p = gaussian_points(100, 300, 7, 0);
        let map = ProjectionMap::new(300, 2, 1).unwrap();
        let check = SubspaceCheck { c: 3, epsilon: 0.3, trials: 50, pairs_per_trial: 10, seed: 2 };
        let r = verify_subspace_distortion(&p, &map, check).unwrap();
        assert!(!r.pass);
        assert!(r.ratios.min < 0.7 || r.ratios.max > 1.3);
    }

    #[test]
    fn flat_through_point_has_zero_distance_both_sides() {
        let p = PointSet::from_rows(&[[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]).unwrap();
        let map = ProjectionMap::new(4, 2, 3).unwrap();
        // q = 1, c = 2: every flat through span{e1, e2} ... sampled flats rarely pass through
        // the points, so check the zero branch directly
        let flat = QFlat::from_directions(vec![1.0, 0.0, 0.0, 0.0], &[vec![-1.0, 1.0, 0.0, 0.0]]).unwrap();
        assert!(flat.distance(p.point(1)).unwrap() < 1e-15);
        let img = map.project_flat(&flat).unwrap();
        assert!(img.distance(&map.apply(p.point(1)).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn point_flats_match_pairwise_ratios() {
        // q = 0, c = 1: the flat is a multiple of a single point
        let p = gaussian_points(12, 40, 5, 0);
        let map = ProjectionMap::new(40, 20, 6).unwrap();
        let r = verify_flat_distance_distortion(&p, &map, FlatCheck { c: 1, q: 0, epsilon: 0.9, trials: 20, seed: 1 })
            .unwrap();
        assert_eq!(r.ratios.count + r.zero_distance, 240);
        assert!(r.ratios.min > 0.0);
    }

    #[test]
    fn flat_check_at_theory_dimension_passes() {
        let p = gaussian_points(60, 300, 8, 0);
        let m = flat_distance_dimension(60, 3, 0.3, 1.0).unwrap();
        let map = ProjectionMap::new(300, m, 4).unwrap();
        let r = verify_flat_distance_distortion(&p, &map, FlatCheck { c: 3, q: 1, epsilon: 0.3, trials: 60, seed: 3 })
            .unwrap();
        assert!(r.pass, "{:?}", r.ratios);
    }

    #[test]
    fn bad_parameters_rejected() {
        let p = gaussian_points(4, 5, 1, 0);
        let map = ProjectionMap::new(5, 2, 1).unwrap();
        assert!(verify_flat_distance_distortion(&p, &map, FlatCheck { c: 2, q: 2, epsilon: 0.5, trials: 1, seed: 0 }).is_err());
        let check = SubspaceCheck { c: 5, epsilon: 0.3, trials: 1, pairs_per_trial: 1, seed: 0 };
        assert!(verify_subspace_distortion(&p, &map, check).is_err());
    }
}
