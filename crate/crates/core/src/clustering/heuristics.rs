use rand::Rng;
use rayon::prelude::*;

use crate::clustering::{ClusteringSolution, ProblemSpec};
use crate::coresets::optimal_center;
use crate::error::{invalid, Result};
use crate::geometry::{aggregate, best_fit_flat_l2, best_fit_flat_weighted, Norm, PointSet, QFlat};
use crate::linalg::dist_sq;
use crate::rng::{stream, Purpose};

pub const DEFAULT_MAX_ITERS: usize = 100;
pub const DEFAULT_RESTARTS: usize = 16;
/// Reweighting rounds per cluster refit when rho is not 2.
const IRLS_ROUNDS: usize = 25;
/// Exponent standing in for rho = ∞ in the reweighting.
const IRLS_INF_EXPONENT: f64 = 16.0;

fn check_k(points: &PointSet, k: usize) -> Result<()> {
    if k == 0 || k > points.len() {
        return Err(invalid(format!("k must lie in 1..={}, got {k}", points.len())));
    }
    Ok(())
}

/// Farthest-point traversal from point 0. A 2-approximation for k-center.
pub fn k_center_greedy(points: &PointSet, k: usize) -> Result<ClusteringSolution> {
    check_k(points, k)?;
    let mut centers = vec![0];
    let mut near: Vec<f64> = points.iter().map(|p| dist_sq(p, points.point(0))).collect();
    while centers.len() < k {
        let far = (0..near.len()).fold(0, |b, i| if near[i] > near[b] { i } else { b });
        centers.push(far);
        for (i, p) in points.iter().enumerate() {
            near[i] = near[i].min(dist_sq(p, points.point(far)));
        }
    }
    let flats = centers.iter().map(|&c| QFlat::point(points.point(c).to_vec())).collect();
    ClusteringSolution::evaluate(points, flats, Norm::Infinity)
}

/// Index drawn with probability proportional to `weights` from one uniform
/// variate, by scanning cumulative sums. Falls back to uniform when all
/// weights vanish.
fn sample_index<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let u: f64 = rng.random();
    if total <= 0.0 {
        return ((u * weights.len() as f64) as usize).min(weights.len() - 1);
    }
    let target = u * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if acc > target {
            return i;
        }
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Lloyd's method after k-means++ seeding.
///
/// Stops at an assignment fixpoint or after `max_iters` rounds. Empty
/// clusters keep their previous center, so the objective never increases.
pub fn lloyd_kmeans(points: &PointSet, k: usize, seed: u64, max_iters: usize) -> Result<ClusteringSolution> {
    check_k(points, k)?;
    let mut rng = stream(seed, Purpose::Seeding, 0);
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    let uniform = vec![1.0; points.len()];
    centers.push(points.point(sample_index(&mut rng, &uniform)).to_vec());
    let mut near: Vec<f64> = points.iter().map(|p| dist_sq(p, &centers[0])).collect();
    while centers.len() < k {
        let c = points.point(sample_index(&mut rng, &near)).to_vec();
        for (i, p) in points.iter().enumerate() {
            near[i] = near[i].min(dist_sq(p, &c));
        }
        centers.push(c);
    }

    let to_flats = |cs: &[Vec<f64>]| cs.iter().map(|c| QFlat::point(c.clone())).collect::<Vec<_>>();
    let mut sol = ClusteringSolution::evaluate(points, to_flats(&centers), Norm::TWO)?;
    for _ in 0..max_iters {
        let d = points.dim();
        let mut sums = vec![vec![0.0; d]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&sol.assignment) {
            crate::linalg::axpy(1.0, p, &mut sums[a]);
            counts[a] += 1;
        }
        for ((c, s), &m) in centers.iter_mut().zip(sums).zip(&counts) {
            if m > 0 {
                *c = s.into_iter().map(|x| x / m as f64).collect();
            }
        }
        let next = ClusteringSolution::evaluate(points, to_flats(&centers), Norm::TWO)?;
        let fixpoint = next.assignment == sol.assignment;
        if next.value <= sol.value {
            sol = next;
        }
        if fixpoint {
            break;
        }
    }
    Ok(sol)
}

/// Settings for [`alternating_qflat`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlternatingOptions {
    pub max_iters: usize,
    pub restarts: usize,
}

impl Default for AlternatingOptions {
    fn default() -> Self {
        Self { max_iters: DEFAULT_MAX_ITERS, restarts: DEFAULT_RESTARTS }
    }
}

/// Alternates nearest-flat assignment and per-cluster refits.
///
/// Each restart seeds flats one at a time: a point drawn with probability
/// proportional to its squared distance from the flats so far, fitted
/// together with its q nearest neighbours. Refits use the best-fit flat for
/// rho = 2 and the optimal center for q = 0; other cases start from the
/// best-fit flat and improve it by iteratively reweighted fits. A refit is
/// kept only when it lowers the cluster cost, so the objective never
/// increases. Returns the best restart, lowest restart index on ties.
pub fn alternating_qflat(points: &PointSet, spec: ProblemSpec, seed: u64, opts: AlternatingOptions) -> Result<ClusteringSolution> {
    spec.check(points)?;
    check_k(points, spec.k)?;
    if opts.restarts == 0 {
        return Err(invalid("need at least one restart"));
    }
    let runs: Vec<Result<ClusteringSolution>> =
        (0..opts.restarts).into_par_iter().map(|r| alternating_run(points, spec, seed, r as u64, opts.max_iters)).collect();
    let mut best: Option<ClusteringSolution> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn alternating_run(points: &PointSet, spec: ProblemSpec, seed: u64, restart: u64, max_iters: usize) -> Result<ClusteringSolution> {
    let mut rng = stream(seed, Purpose::Restarts, restart);
    let mut flats: Vec<QFlat> = Vec::with_capacity(spec.k);
    let mut near = vec![1.0; points.len()];
    while flats.len() < spec.k {
        let s = sample_index(&mut rng, &near);
        let flat = neighbourhood_flat(points, s, spec.q)?;
        for (i, p) in points.iter().enumerate() {
            let d = flat.distance_unchecked(p);
            near[i] = if flats.is_empty() { d * d } else { near[i].min(d * d) };
        }
        flats.push(flat);
    }
    let mut sol = ClusteringSolution::evaluate(points, flats, spec.rho)?;
    for _ in 0..max_iters {
        let mut flats = sol.flats.clone();
        for (j, members) in sol.clusters().iter().enumerate() {
            if !members.is_empty() {
                flats[j] = refit(points, members, spec, &flats[j])?;
            }
        }
        let next = ClusteringSolution::evaluate(points, flats, spec.rho)?;
        let fixpoint = next.assignment == sol.assignment;
        if next.value > sol.value {
            break;
        }
        sol = next;
        if fixpoint {
            break;
        }
    }
    Ok(sol)
}

/// Best-fit flat through point `s` and its `q` nearest neighbours.
fn neighbourhood_flat(points: &PointSet, s: usize, q: usize) -> Result<QFlat> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    let ps = points.point(s);
    order.sort_by(|&a, &b| dist_sq(points.point(a), ps).total_cmp(&dist_sq(points.point(b), ps)).then(a.cmp(&b)));
    order.retain(|&i| i != s);
    let mut chosen = vec![s];
    chosen.extend(order.into_iter().take(q));
    best_fit_flat_l2(&points.subset(&chosen)?, q)
}

fn cluster_cost(sub: &PointSet, flat: &QFlat, rho: Norm) -> f64 {
    let d: Vec<f64> = sub.iter().map(|p| flat.distance_unchecked(p)).collect();
    aggregate(&d, rho)
}

pub(crate) fn refit(points: &PointSet, members: &[usize], spec: ProblemSpec, current: &QFlat) -> Result<QFlat> {
    let sub = points.subset(members)?;
    let mut best = current.clone();
    let mut best_cost = cluster_cost(&sub, current, spec.rho);
    let consider = |f: QFlat, best: &mut QFlat, best_cost: &mut f64| {
        let c = cluster_cost(&sub, &f, spec.rho);
        if c < *best_cost {
            *best = f;
            *best_cost = c;
        }
    };
    if spec.q == 0 {
        let o = optimal_center(&sub, spec.rho)?;
        consider(QFlat::point(o.center), &mut best, &mut best_cost);
        return Ok(best);
    }
    consider(best_fit_flat_l2(&sub, spec.q)?, &mut best, &mut best_cost);
    if spec.rho == Norm::TWO {
        return Ok(best);
    }
    let exponent = match spec.rho {
        Norm::Finite(r) => r as f64,
        Norm::Infinity => IRLS_INF_EXPONENT,
    };
    let mut guide = best.clone();
    for _ in 0..IRLS_ROUNDS {
        let d: Vec<f64> = sub.iter().map(|p| guide.distance_unchecked(p)).collect();
        let top = d.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            break;
        }
        let floor = 1e-9 * top;
        let w: Vec<f64> = d.iter().map(|&x| (x.max(floor) / top).powf(exponent - 2.0)).collect();
        guide = best_fit_flat_weighted(&sub, Some(&w), spec.q)?;
        consider(guide.clone(), &mut best, &mut best_cost);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::brute_force_optimal;
    use crate::geometry::{meb, objective};

    fn spec(k: usize, q: usize, rho: Norm) -> ProblemSpec {
        ProblemSpec::new(k, q, rho).unwrap()
    }

    fn consistent(p: &PointSet, s: &ClusteringSolution, rho: Norm) {
        assert!((s.value - objective(p, &s.flats, rho).unwrap()).abs() <= 1e-9 * s.value.max(1.0));
    }

    #[test]
    fn k_center_examples() {
        let p = crate::projection::gaussian_points(8, 3, 1, 0);
        let s = k_center_greedy(&p, 8).unwrap();
        assert_eq!(s.value, 0.0);
        let s = k_center_greedy(&p, 1).unwrap();
        let far = p.iter().map(|x| dist_sq(x, p.point(0)).sqrt()).fold(0.0, f64::max);
        assert_eq!(s.value, far);
        assert!(s.value <= 2.0 * meb(&p).radius + 1e-12);
        assert!(k_center_greedy(&p, 9).is_err());
    }

    #[test]
    fn k_center_two_approximation() {
        for seed in 0..10 {
            let mut rows: Vec<Vec<f64>> = crate::projection::uniform_points(10, 2, seed, 0).rows().iter().map(|r| r.to_vec()).collect();
            for r in rows.iter_mut().skip(5) {
                r[0] += 20.0;
            }
            let p = PointSet::from_rows(&rows).unwrap();
            let g = k_center_greedy(&p, 2).unwrap();
            let opt = brute_force_optimal(&p, spec(2, 0, Norm::Infinity)).unwrap();
            assert!(g.value <= 2.0 * opt.value + 1e-12);
            assert!(g.value <= 2f64.sqrt() * 2.0);
            consistent(&p, &g, Norm::Infinity);
        }
    }

    #[test]
    fn lloyd_examples() {
        let p = crate::projection::gaussian_points(6, 2, 4, 0);
        assert_eq!(lloyd_kmeans(&p, 6, 0, 50).unwrap().value, 0.0);
        let pairs = PointSet::from_rows(&[[0.0, 0.0], [0.0, 1.0], [9.0, 0.0], [9.0, 1.0]]).unwrap();
        for seed in 0..10 {
            let s = lloyd_kmeans(&pairs, 2, seed, 50).unwrap();
            let opt = brute_force_optimal(&pairs, spec(2, 0, Norm::TWO)).unwrap();
            assert!((s.value - opt.value).abs() < 1e-12, "seed {seed}");
            consistent(&pairs, &s, Norm::TWO);
        }
    }

    #[test]
    fn lloyd_duplicated_input() {
        let p = crate::projection::gaussian_points(30, 3, 8, 0);
        let doubled: Vec<&[f64]> = p.iter().flat_map(|r| [r, r]).collect();
        let q = PointSet::from_rows(&doubled).unwrap();
        for seed in 0..5 {
            let a = lloyd_kmeans(&p, 3, seed, 100).unwrap();
            let b = lloyd_kmeans(&q, 3, seed, 100).unwrap();
            for (fa, fb) in a.flats.iter().zip(&b.flats) {
                assert!(dist_sq(fa.anchor(), fb.anchor()) < 1e-20);
            }
        }
    }

    #[test]
    fn skew_lines_are_recovered() {
        let mut rows = Vec::new();
        for i in 0..15 {
            let t = i as f64 - 7.0;
            rows.push(vec![t, 0.0, 0.0]);
            rows.push(vec![0.0, 0.5 * t, 5.0]);
        }
        let p = PointSet::from_rows(&rows).unwrap();
        let s = alternating_qflat(&p, spec(2, 1, Norm::TWO), 1, AlternatingOptions::default()).unwrap();
        assert!(s.value <= 1e-6, "{}", s.value);
    }

    #[test]
    fn hyperplane_is_pca() {
        let p = crate::projection::gaussian_points(25, 4, 2, 0);
        let s = alternating_qflat(&p, spec(1, 3, Norm::TWO), 0, AlternatingOptions::default()).unwrap();
        let want = objective(&p, &[best_fit_flat_l2(&p, 3).unwrap()], Norm::TWO).unwrap();
        assert!((s.value - want).abs() <= 1e-9 * want);
    }

    #[test]
    fn matches_brute_force_on_small_inputs() {
        for seed in 0..20 {
            let p = crate::projection::gaussian_points(10, 3, seed, 1);
            let s = alternating_qflat(&p, spec(2, 0, Norm::TWO), seed, AlternatingOptions::default()).unwrap();
            let opt = brute_force_optimal(&p, spec(2, 0, Norm::TWO)).unwrap();
            assert!(s.value <= (1.0 + 1e-6) * opt.value, "seed {seed}: {} vs {}", s.value, opt.value);
            assert!(opt.value <= s.value + 1e-9);
        }
    }

    #[test]
    fn other_norms_never_increase() {
        let p = crate::projection::gaussian_points(40, 3, 5, 0);
        for rho in [Norm::ONE, Norm::Finite(3), Norm::Infinity] {
            let one = AlternatingOptions { max_iters: 0, restarts: 1 };
            let start = alternating_qflat(&p, spec(2, 1, rho), 9, one).unwrap();
            let end = alternating_qflat(&p, spec(2, 1, rho), 9, AlternatingOptions { max_iters: 30, restarts: 1 }).unwrap();
            assert!(end.value <= start.value);
            consistent(&p, &end, rho);
        }
    }
}
