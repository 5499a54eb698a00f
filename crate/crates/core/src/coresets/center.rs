use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{center_objective, meb, Norm, PointSet};
use crate::linalg::{self, axpy, cholesky_solve, dist, norm};

pub const WEISZFELD_TOL: f64 = 1e-9;
pub const WEISZFELD_MAX_ITERS: usize = 100_000;
pub const DESCENT_TOL: f64 = 1e-7;
pub const DESCENT_MAX_ITERS: usize = 100_000;

/// The (near-)optimal single center for an L_rho objective, with its value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterOracle {
    pub rho: Norm,
    pub center: Vec<f64>,
    /// `objective(P, {center}, rho)`.
    pub value: f64,
    /// Iterations used by the iterative solvers; 0 for closed forms.
    pub iterations: usize,
}

impl CenterOracle {
    /// Wraps a known center, computing its value.
    pub fn from_center(points: &PointSet, rho: Norm, center: Vec<f64>) -> Result<Self> {
        let value = center_objective(points, &center, rho)?;
        Ok(Self { rho, center, value, iterations: 0 })
    }
}

/// Centroid for rho = 2, enclosing-ball center for rho = ∞, Weiszfeld for
/// rho = 1, damped Newton descent otherwise.
pub fn optimal_center(points: &PointSet, rho: Norm) -> Result<CenterOracle> {
    let (center, iterations) = match rho {
        Norm::Finite(2) => (points.centroid(), 0),
        Norm::Infinity => (meb(points).center, 0),
        Norm::Finite(1) => weiszfeld(points),
        Norm::Finite(0) => return Err(Error::InvalidParameter("rho must be at least 1".into())),
        Norm::Finite(r) => power_descent(points, r),
    };
    let mut oracle = CenterOracle::from_center(points, rho, center)?;
    oracle.iterations = iterations;
    Ok(oracle)
}

fn extent(points: &PointSet, c: &[f64]) -> f64 {
    points.iter().map(|p| dist(p, c)).fold(0.0, f64::max)
}

/// Weiszfeld iteration with the Vardi-Zhang correction at data points.
///
/// Stops when the (sub)gradient norm of `sum |x - p|` drops to
/// [`WEISZFELD_TOL`] or after [`WEISZFELD_MAX_ITERS`] steps.
fn weiszfeld(points: &PointSet) -> (Vec<f64>, usize) {
    let d = points.dim();
    let mut y = points.centroid();
    let scale = extent(points, &y);
    if scale == 0.0 {
        return (y, 0);
    }
    let coincide = 1e-15 * scale;
    for it in 0..WEISZFELD_MAX_ITERS {
        let mut num = vec![0.0; d];
        let mut den = 0.0;
        let mut pull = vec![0.0; d];
        let mut eta = 0.0;
        for p in points.iter() {
            let dp = dist(p, &y);
            if dp <= coincide {
                eta += 1.0;
                continue;
            }
            let w = 1.0 / dp;
            axpy(w, p, &mut num);
            den += w;
            for ((r, pi), yi) in pull.iter_mut().zip(p).zip(&y) {
                *r += (pi - yi) * w;
            }
        }
        let r = norm(&pull);
        let grad = if eta > 0.0 { (r - eta).max(0.0) } else { r };
        if grad <= WEISZFELD_TOL || den == 0.0 {
            return (y, it);
        }
        let t: Vec<f64> = num.iter().map(|x| x / den).collect();
        let next: Vec<f64> = if eta > 0.0 {
            let a = (1.0 - eta / r).max(0.0);
            let b = (eta / r).min(1.0);
            t.iter().zip(&y).map(|(ti, yi)| a * ti + b * yi).collect()
        } else {
            t
        };
        if next == y {
            return (y, it);
        }
        y = next;
    }
    (y, WEISZFELD_MAX_ITERS)
}

/// Minimizes `sum (|x - p| / s)^rho` for finite rho >= 3 by Newton steps with
/// backtracking; `s` is the initial extent, so values stay in range. Falls
/// back to a gradient step when the Hessian is numerically singular.
fn power_descent(points: &PointSet, rho: u32) -> (Vec<f64>, usize) {
    let d = points.dim();
    let mut x = points.centroid();
    let s = extent(points, &x);
    if s == 0.0 {
        return (x, 0);
    }
    let r = rho as f64;
    let phi = |x: &[f64]| -> f64 { points.iter().map(|p| (dist(p, x) / s).powi(rho as i32)).sum() };
    let mut fx = phi(&x);
    for it in 0..DESCENT_MAX_ITERS {
        let mut grad = vec![0.0; d];
        let mut hess = vec![0.0; d * d];
        for p in points.iter() {
            let diff: Vec<f64> = x.iter().zip(p).map(|(a, b)| (a - b) / s).collect();
            let t = norm(&diff);
            if t == 0.0 {
                continue;
            }
            let w = r * t.powi(rho as i32 - 2);
            axpy(w, &diff, &mut grad);
            let w2 = r * (r - 2.0) * t.powi(rho as i32 - 4);
            for a in 0..d {
                hess[a * d + a] += w;
                for b in 0..d {
                    hess[a * d + b] += w2 * diff[a] * diff[b];
                }
            }
        }
        let gnorm = norm(&grad);
        if gnorm == 0.0 {
            return (x, it);
        }
        // Newton direction in normalized coordinates, gradient as fallback
        let dir = cholesky_solve(&hess, &grad, d, 1e-14).unwrap_or_else(|| grad.clone());
        let slope = linalg::dot(&grad, &dir);
        // Newton decrement test: predicted relative gain below DESCENT_TOL²
        if slope <= DESCENT_TOL * DESCENT_TOL * fx {
            return (x, it);
        }
        let mut step = 1.0;
        let mut accepted = None;
        while step > 1e-20 {
            let cand: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi - step * s * di).collect();
            let fc = phi(&cand);
            if fc <= fx - 1e-4 * step * slope {
                accepted = Some((cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc)) = accepted else { return (x, it) };
        let stalled = fc >= fx;
        x = cand;
        fx = fc;
        if stalled {
            return (x, it + 1);
        }
    }
    (x, DESCENT_MAX_ITERS)
}
