//! Minimum enclosing balls.
//!
//! Three routes, picked by input size:
//!
//! * up to [`ENUMERATION_MAX_POINTS`] points: every subset's circumball (in
//!   the subset's affine hull) is tried and the smallest enclosing one wins;
//! * when `d <= 10`: Welzl's move-to-front recursion, whose depth is bounded
//!   by the support size;
//! * otherwise a pivoting walk that moves the center toward the circumcenter
//!   of a support set, trading support points in and out.
//!
//! Circumballs are always computed from the support sorted by input position,
//! so two inputs sharing a support get bit-identical balls. That keeps Čech
//! filtrations exactly monotone under face inclusion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::linalg::{self, cholesky_solve, dist, dist_sq, dot};

pub const ENUMERATION_MAX_POINTS: usize = 6;
pub const WELZL_MAX_DIM: usize = 10;
const PIVOT_WEIGHT_TOL: f64 = 1e-10;
const PIVOT_DENOM_TOL: f64 = 1e-12;

const INSIDE_REL: f64 = 1e-12;
const GRAM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        dist(p, &self.center) <= self.radius + tol
    }
}

/// The minimum enclosing ball of `points`.
pub fn meb(points: &PointSet) -> Ball {
    meb_of(&points.rows())
}

/// Same as [`meb`] on borrowed rows. Panics on empty input.
pub fn meb_of(points: &[&[f64]]) -> Ball {
    assert!(!points.is_empty(), "meb of an empty set");
    let n = points.len();
    let d = points[0].len();
    let (center, support_radius) = if n <= ENUMERATION_MAX_POINTS {
        by_enumeration(points)
    } else if d <= WELZL_MAX_DIM {
        let all: Vec<usize> = (0..n).collect();
        let (c, r, _) = welzl(points, &all);
        if encloses(points, &c, r) {
            (c, r)
        } else {
            pivoting(points)
        }
    } else {
        pivoting(points)
    };
    let far = points.iter().map(|p| dist(p, &center)).fold(0.0, f64::max);
    let radius = if far > support_radius * (1.0 + INSIDE_REL) { far } else { support_radius };
    Ball { center, radius }
}

/// Fallible wrapper used by callers that want an error instead of a panic.
pub fn try_meb_of(points: &[&[f64]]) -> Result<Ball> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    Ok(meb_of(points))
}

fn encloses(points: &[&[f64]], c: &[f64], r: f64) -> bool {
    let limit = r * r * (1.0 + 2.0 * INSIDE_REL) + f64::MIN_POSITIVE;
    points.iter().all(|p| dist_sq(p, c) <= limit)
}

fn outside(p: &[f64], c: &[f64], r: f64) -> bool {
    dist_sq(p, c) > r * r * (1.0 + 2.0 * INSIDE_REL) + f64::MIN_POSITIVE
}

/// Circumball of the support points within their affine hull.
///
/// `support` holds indices into `points`; they are sorted before use. Returns
/// `None` for affinely dependent supports.
fn circumball(points: &[&[f64]], support: &[usize]) -> Option<(Vec<f64>, f64)> {
    let mut s = support.to_vec();
    s.sort_unstable();
    match s.len() {
        0 => None,
        1 => Some((points[s[0]].to_vec(), 0.0)),
        2 => {
            let (a, b) = (points[s[0]], points[s[1]]);
            let c = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
            let r = 0.5 * dist(a, b);
            if r == 0.0 {
                return None;
            }
            Some((c, r))
        }
        k => {
            let origin = points[s[0]];
            let dirs: Vec<Vec<f64>> = s[1..].iter().map(|&i| linalg::sub(points[i], origin)).collect();
            let m = k - 1;
            let mut gram = vec![0.0; m * m];
            for i in 0..m {
                for j in 0..=i {
                    let g = dot(&dirs[i], &dirs[j]);
                    gram[i * m + j] = g;
                    gram[j * m + i] = g;
                }
            }
            let rhs: Vec<f64> = (0..m).map(|i| 0.5 * gram[i * m + i]).collect();
            let alpha = cholesky_solve(&gram, &rhs, m, GRAM_TOL)?;
            let mut c = origin.to_vec();
            for (a, v) in alpha.iter().zip(&dirs) {
                linalg::axpy(*a, v, &mut c);
            }
            let r = s.iter().map(|&i| dist(points[i], &c)).fold(0.0, f64::max);
            Some((c, r))
        }
    }
}

fn by_enumeration(points: &[&[f64]]) -> (Vec<f64>, f64) {
    let n = points.len();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let Some((c, r)) = circumball(points, &support) else { continue };
        if best.as_ref().is_some_and(|(_, br)| r >= *br) {
            continue;
        }
        if encloses(points, &c, r) {
            best = Some((c, r));
        }
    }
    // every input has at least one enclosing circumball (the farthest pair or a single point)
    best.unwrap_or_else(|| pivoting(points))
}

/// Welzl's move-to-front algorithm on `points[subset]`.
///
/// Returns center, support radius, and support (indices into `points`).
fn welzl(points: &[&[f64]], subset: &[usize]) -> (Vec<f64>, f64, Vec<usize>) {
    let d = points[0].len();
    let mut order = subset.to_vec();
    let mut state = WelzlState {
        points,
        max_support: (d + 1).min(subset.len()),
        center: points[subset[0]].to_vec(),
        radius: -1.0,
        best_support: vec![subset[0]],
    };
    let mut support = Vec::new();
    let end = order.len();
    state.mtf(&mut order, end, &mut support);
    let radius = state.radius.max(0.0);
    (state.center, radius, state.best_support)
}

struct WelzlState<'a> {
    points: &'a [&'a [f64]],
    max_support: usize,
    center: Vec<f64>,
    radius: f64,
    best_support: Vec<usize>,
}

impl WelzlState<'_> {
    fn mtf(&mut self, order: &mut Vec<usize>, end: usize, support: &mut Vec<usize>) {
        match circumball(self.points, support) {
            Some((c, r)) => {
                self.center = c;
                self.radius = r;
                self.best_support = support.clone();
            }
            None => {
                if support.is_empty() {
                    self.radius = -1.0;
                }
            }
        }
        if support.len() == self.max_support {
            return;
        }
        let mut i = 0;
        while i < end {
            let idx = order[i];
            let is_out = self.radius < 0.0 || outside(self.points[idx], &self.center, self.radius);
            if is_out {
                support.push(idx);
                if circumball(self.points, support).is_some() {
                    self.mtf(order, i, support);
                }
                support.pop();
                order[..=i].rotate_right(1);
            }
            i += 1;
        }
    }
}

/// Pivoting walk for many points in high dimension.
///
/// Keeps a ball through the support set `t` that encloses every point, and
/// walks its center toward the circumcenter of `t`, adding the first point
/// that hits the shrinking sphere. At the circumcenter, a support point with
/// negative affine weight is dropped; when none is left the ball is optimal.
fn pivoting(points: &[&[f64]]) -> (Vec<f64>, f64) {
    let n = points.len();
    let mut c = points[0].to_vec();
    let first = farthest(points, &c).0;
    let mut t = vec![first];
    let mut in_t = vec![false; n];
    in_t[first] = true;
    let mut at_circumcenter = false;
    let cap = 20 * (n + points[0].len()) + 100;
    for _ in 0..cap {
        let Some((cc, weights)) = affine_circumcenter(points, &t) else {
            let dropped = t.pop().expect("support is never empty");
            in_t[dropped] = false;
            at_circumcenter = false;
            continue;
        };
        if at_circumcenter {
            let (worst, w) = weights
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |b, (i, &w)| if w < b.1 { (i, w) } else { b });
            if w >= -PIVOT_WEIGHT_TOL || t.len() == 1 {
                break;
            }
            in_t[t.remove(worst)] = false;
            at_circumcenter = false;
            continue;
        }
        let v = linalg::sub(&cc, &c);
        let v_norm = linalg::norm(&v);
        let q = points[t[0]];
        let r_sq = dist_sq(q, &c);
        let mut stop: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            if in_t[i] {
                continue;
            }
            let denom: f64 = 2.0 * q.iter().zip(*p).zip(&v).map(|((a, b), w)| (a - b) * w).sum::<f64>();
            if denom <= PIVOT_DENOM_TOL * v_norm * dist(q, p) {
                continue;
            }
            let step = ((r_sq - dist_sq(p, &c)) / denom).max(0.0);
            if step < 1.0 && stop.is_none_or(|(_, s)| step < s) {
                stop = Some((i, step));
            }
        }
        match stop {
            Some((i, step)) => {
                linalg::axpy(step, &v, &mut c);
                t.push(i);
                in_t[i] = true;
            }
            None => {
                c = cc;
                at_circumcenter = true;
            }
        }
    }
    match circumball(points, &t) {
        Some(ball) => ball,
        None => {
            let r = t.iter().map(|&i| dist(points[i], &c)).fold(0.0, f64::max);
            (c, r)
        }
    }
}

/// Circumcenter of `points[t]` in their affine hull, with its affine weights.
fn affine_circumcenter(points: &[&[f64]], t: &[usize]) -> Option<(Vec<f64>, Vec<f64>)> {
    let origin = points[t[0]];
    if t.len() == 1 {
        return Some((origin.to_vec(), vec![1.0]));
    }
    let dirs: Vec<Vec<f64>> = t[1..].iter().map(|&i| linalg::sub(points[i], origin)).collect();
    let m = dirs.len();
    let mut gram = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let g = dot(&dirs[i], &dirs[j]);
            gram[i * m + j] = g;
            gram[j * m + i] = g;
        }
    }
    let rhs: Vec<f64> = (0..m).map(|i| 0.5 * gram[i * m + i]).collect();
    let alpha = cholesky_solve(&gram, &rhs, m, GRAM_TOL)?;
    let mut c = origin.to_vec();
    for (a, v) in alpha.iter().zip(&dirs) {
        linalg::axpy(*a, v, &mut c);
    }
    let mut weights = Vec::with_capacity(t.len());
    weights.push(1.0 - alpha.iter().sum::<f64>());
    weights.extend(alpha);
    Some((c, weights))
}

fn farthest(points: &[&[f64]], from: &[f64]) -> (usize, f64) {
    let mut best = (0, -1.0);
    for (i, p) in points.iter().enumerate() {
        let d = dist(p, from);
        if d > best.1 {
            best = (i, d);
        }
    }
    best
}
