use crate::coresets::{CenterOracle, Coreset, TraceRow};
use crate::error::{invalid, Result};
use crate::geometry::{center_objective, Norm, PointSet};
use crate::linalg::{dist, dot, sub};

/// Relative slack on δ comparisons, scaled by δ(o).
pub const DELTA_REL_TOL: f64 = 1e-9;

/// `ceil(x)` that ignores floating-point noise just above an integer.
pub(crate) fn ceil_tol(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// Hard iteration cap `ceil((4/ε) ln(4/ε))`.
pub fn greedy_iteration_cap(epsilon: f64) -> usize {
    ceil_tol(4.0 / epsilon * (4.0 / epsilon).ln())
}

/// Contraction coreset for a single center.
///
/// Starts at the input point closest to the oracle center `o`. While the
/// current point `c` is not a (1+ε)-approximate center, picks the point `s`
/// maximizing `d(c, s) / d(o, s)` and moves `c` to the point of segment
/// `[c, s]` closest to `o`. Each move shrinks `d(c, o)` by at least a
/// `(1 - ε/2)` factor; the trace records every iterate.
///
/// The iteration limit is `ceil((2/ε) ln(d(c₀,o) / (ε r)))` with `r` the
/// smallest positive `d(o, p)`, capped at [`greedy_iteration_cap`]. Since
/// `c₀` is the closest point to `o`, that limit suffices for the guarantee.
pub fn greedy_center_coreset(points: &PointSet, rho: Norm, epsilon: f64, oracle: &CenterOracle) -> Result<Coreset> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if oracle.rho != rho {
        return Err(invalid(format!("oracle was built for rho = {}, not {rho}", oracle.rho)));
    }
    crate::error::check_dim(points.dim(), oracle.center.len())?;
    let o = &oracle.center;
    let target = (1.0 + epsilon) * oracle.value + DELTA_REL_TOL * oracle.value;

    let to_o: Vec<f64> = points.iter().map(|p| dist(p, o)).collect();
    let start = (0..points.len()).fold(0, |best, i| if to_o[i] < to_o[best] { i } else { best });
    let mut c = points.point(start).to_vec();
    let mut indices = vec![start];
    let mut value = center_objective(points, &c, rho)?;
    let mut trace = vec![TraceRow { index: start, step: 0.0, distance: dist(&c, o), value }];

    if oracle.value == 0.0 {
        return Ok(Coreset { indices, witness: c, trace });
    }
    let nearest_positive = to_o.iter().copied().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
    let d0 = dist(&c, o);
    let limit = if d0 == 0.0 || !nearest_positive.is_finite() {
        0
    } else {
        let needed = (2.0 / epsilon * (d0 / (epsilon * nearest_positive)).ln()).ceil().max(1.0) as usize;
        needed.min(greedy_iteration_cap(epsilon))
    };

    for _ in 0..limit {
        if value <= target {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            if to_o[i] == 0.0 {
                continue;
            }
            let ratio = dist(&c, p) / to_o[i];
            if best.is_none_or(|(_, r)| ratio > r) {
                best = Some((i, ratio));
            }
        }
        let Some((s, _)) = best else { break };
        let seg = sub(points.point(s), &c);
        let len2 = dot(&seg, &seg);
        let t = if len2 == 0.0 { 0.0 } else { (dot(&sub(o, &c), &seg) / len2).clamp(0.0, 1.0) };
        for (ci, si) in c.iter_mut().zip(&seg) {
            *ci += t * si;
        }
        if !indices.contains(&s) {
            indices.push(s);
        }
        value = center_objective(points, &c, rho)?;
        trace.push(TraceRow { index: s, step: t, distance: dist(&c, o), value });
    }
    Ok(Coreset { indices, witness: c, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coresets::optimal_center;

    #[test]
    fn single_point() {
        let p = PointSet::from_rows(&[[3.0, 4.0]]).unwrap();
        let o = optimal_center(&p, Norm::TWO).unwrap();
        let c = greedy_center_coreset(&p, Norm::TWO, 0.1, &o).unwrap();
        assert_eq!(c.indices, vec![0]);
        assert_eq!(c.witness, vec![3.0, 4.0]);
    }

    #[test]
    fn symmetric_pair_hand_trace() {
        let p = PointSet::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        let o = optimal_center(&p, Norm::TWO).unwrap();
        let c = greedy_center_coreset(&p, Norm::TWO, 0.1, &o).unwrap();
        // c0 = (0,0) (tie, lowest index), s = (2,0), closest point of the segment to (1,0) is (1,0)
        assert_eq!(c.indices, vec![0, 1]);
        assert_eq!(c.trace.len(), 2);
        assert_eq!(c.trace[1].step, 0.5);
        assert_eq!(c.witness, vec![1.0, 0.0]);
        assert!((c.trace[1].value - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cap_value() {
        assert_eq!(greedy_iteration_cap(0.1), 148);
    }

    #[test]
    fn contraction_and_guarantee_on_random_input() {
        let eps = 0.1;
        for seed in 0..5 {
            let p = crate::projection::gaussian_points(100, 20, seed, 0);
            let o = optimal_center(&p, Norm::TWO).unwrap();
            let c = greedy_center_coreset(&p, Norm::TWO, eps, &o).unwrap();
            assert!(c.len() <= greedy_iteration_cap(eps));
            assert!(c.trace.last().unwrap().value <= (1.0 + eps) * o.value * (1.0 + 1e-9));
            for w in c.trace.windows(2) {
                assert!(w[1].distance <= (1.0 - eps / 2.0) * w[0].distance + 1e-9);
            }
            assert!(c.hull_residual(&p) <= 1e-8);
        }
    }

    #[test]
    fn other_norms_reach_guarantee() {
        let p = crate::projection::uniform_points(40, 5, 3, 0);
        for rho in [Norm::ONE, Norm::Finite(3), Norm::Infinity] {
            let o = optimal_center(&p, rho).unwrap();
            let c = greedy_center_coreset(&p, rho, 0.2, &o).unwrap();
            assert!(c.trace.last().unwrap().value <= 1.2 * o.value * (1.0 + 1e-9), "{rho}");
        }
    }

    #[test]
    fn mismatched_oracle_rejected() {
        let p = PointSet::from_rows(&[[0.0], [1.0]]).unwrap();
        let o = optimal_center(&p, Norm::TWO).unwrap();
        assert!(greedy_center_coreset(&p, Norm::ONE, 0.1, &o).is_err());
        assert!(greedy_center_coreset(&p, Norm::TWO, 1.0, &o).is_err());
    }
}
