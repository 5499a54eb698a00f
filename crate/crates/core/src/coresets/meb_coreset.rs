use crate::coresets::greedy::ceil_tol;
use crate::coresets::{Coreset, TraceRow};
use crate::error::{invalid, Result};
use crate::geometry::{meb_of, PointSet};
use crate::linalg::dist;

/// Size cap `ceil(2/ε)`.
pub fn meb_coreset_cap(epsilon: f64) -> usize {
    ceil_tol(2.0 / epsilon)
}

/// Farthest-point coreset for the minimum enclosing ball.
///
/// Starts from point 0 and repeatedly adds the point farthest from the
/// center of the exact MEB of the current subset, until every point lies
/// within `(1+ε)` times the subset radius or the cap is reached. The witness
/// is the subset MEB center.
pub fn meb_coreset(points: &PointSet, epsilon: f64) -> Result<Coreset> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let cap = meb_coreset_cap(epsilon);
    let mut indices = vec![0];
    let mut ball = meb_of(&[points.point(0)]);
    let mut trace = Vec::new();
    loop {
        let (far, far_d) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dist(p, &ball.center)))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        trace.push(TraceRow { index: *indices.last().unwrap(), step: 0.0, distance: far_d, value: ball.radius });
        if far_d <= (1.0 + epsilon) * ball.radius || indices.len() >= cap || indices.contains(&far) {
            break;
        }
        indices.push(far);
        let rows: Vec<&[f64]> = indices.iter().map(|&i| points.point(i)).collect();
        ball = meb_of(&rows);
    }
    Ok(Coreset { indices, witness: ball.center, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::meb;
    use crate::linalg::dist;

    fn max_dist(p: &PointSet, c: &[f64]) -> f64 {
        p.iter().map(|x| dist(x, c)).fold(0.0, f64::max)
    }

    #[test]
    fn collinear_pair() {
        let p = PointSet::from_rows(&[[0.0, 0.0], [4.0, 0.0]]).unwrap();
        let c = meb_coreset(&p, 0.1).unwrap();
        assert_eq!(c.indices, vec![0, 1]);
        assert_eq!(c.witness, vec![2.0, 0.0]);
    }

    #[test]
    fn identical_points() {
        let p = PointSet::from_rows(&[[1.0, 2.0]; 5]).unwrap();
        let c = meb_coreset(&p, 0.3).unwrap();
        assert_eq!(c.indices, vec![0]);
        assert_eq!(max_dist(&p, &c.witness), 0.0);
    }

    #[test]
    fn regular_polygon() {
        let rows: Vec<[f64; 2]> = (0..12)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 12.0;
                [3.0 * t.cos(), 3.0 * t.sin()]
            })
            .collect();
        let p = PointSet::from_rows(&rows).unwrap();
        let c = meb_coreset(&p, 0.5).unwrap();
        assert!(max_dist(&p, &c.witness) <= 1.5 * 3.0 + 1e-9);
        assert!(c.len() <= 4);
    }

    #[test]
    fn random_instances() {
        for seed in 0..10 {
            let p = crate::projection::gaussian_points(200, 15, seed, 0);
            let c = meb_coreset(&p, 0.2).unwrap();
            assert!(c.len() <= 10);
            assert!(max_dist(&p, &c.witness) <= 1.2 * meb(&p).radius * (1.0 + 1e-9));
            assert!(c.hull_residual(&p) <= 1e-8);
        }
    }
}
