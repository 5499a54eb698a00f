use crate::coresets::greedy::ceil_tol;
use crate::coresets::{Coreset, TraceRow};
use crate::error::{invalid, Result};
use crate::geometry::PointSet;
use crate::linalg::{dist, dist_sq, dot, norm_sq};

/// Number of steps `2 ceil(1/ε)`.
pub fn frank_wolfe_steps(epsilon: f64) -> usize {
    2 * ceil_tol(1.0 / epsilon)
}

/// `g(x) = Σ ‖Ax − p_i‖²` evaluated at `y = Ax` as `n ‖y − p̄‖² + g(o)`.
fn g_at(n: f64, y: &[f64], centroid: &[f64], g_opt: f64) -> f64 {
    n * dist_sq(y, centroid) + g_opt
}

/// Minimum of `g` over the simplex: `Σ ‖p_i − p̄‖²`.
pub fn g_optimum(points: &PointSet) -> f64 {
    let c = points.centroid();
    points.iter().map(|p| dist_sq(p, &c)).sum()
}

/// Frank–Wolfe coreset for the sum of squared distances.
///
/// Works on `y = Ax` directly, so `AᵀA` is never formed. Starts at the
/// vertex closest to the centroid and runs [`frank_wolfe_steps`] steps with
/// exact line search. The trace stores `g` after every step; entry 0 is the
/// starting vertex.
pub fn frank_wolfe_coreset(points: &PointSet, epsilon: f64) -> Result<Coreset> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let n = points.len() as f64;
    let centroid = points.centroid();
    let g_opt = g_optimum(points);

    let start = (0..points.len())
        .map(|i| (i, dist_sq(points.point(i), &centroid)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        .0;
    let mut y = points.point(start).to_vec();
    let mut indices = vec![start];
    let mut trace = vec![TraceRow {
        index: start,
        step: 1.0,
        distance: dist(&y, &centroid),
        value: g_at(n, &y, &centroid, g_opt),
    }];

    let mut residual = vec![0.0; y.len()];
    for _ in 0..frank_wolfe_steps(epsilon) {
        for ((r, yi), ci) in residual.iter_mut().zip(&y).zip(&centroid) {
            *r = yi - ci;
        }
        // ∇g(x)_j = 2n p_j·(y − p̄)
        let mut j = 0;
        let mut best = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            let gj = dot(p, &residual);
            if gj < best {
                best = gj;
                j = i;
            }
        }
        let pj = points.point(j);
        let v: Vec<f64> = pj.iter().zip(&y).map(|(a, b)| a - b).collect();
        let vv = norm_sq(&v);
        let gamma = if vv == 0.0 { 0.0 } else { (-dot(&residual, &v) / vv).clamp(0.0, 1.0) };
        if gamma == 0.0 {
            break;
        }
        for (yi, vi) in y.iter_mut().zip(&v) {
            *yi += gamma * vi;
        }
        if !indices.contains(&j) {
            indices.push(j);
        }
        trace.push(TraceRow {
            index: j,
            step: gamma,
            distance: dist(&y, &centroid),
            value: g_at(n, &y, &centroid, g_opt),
        });
    }
    Ok(Coreset { indices, witness: y, trace })
}
