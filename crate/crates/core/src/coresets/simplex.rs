use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{aggregate, Norm, PointSet};

/// Relative tolerance for the analytic against numeric comparison.
pub const SIMPLEX_CHECK_TOL: f64 = 1e-9;

/// Standard simplex `e_1, …, e_n` in `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexInstance {
    n: usize,
}

impl SimplexInstance {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dense point set. Uses `n²` coordinates.
    pub fn points(&self) -> PointSet {
        let n = self.n;
        let mut coords = vec![0.0; n * n];
        for i in 0..n {
            coords[i * n + i] = 1.0;
        }
        PointSet::new(n, coords).expect("simplex is a valid point set")
    }

    /// Barycenter of the first `c` vertices.
    pub fn face_barycenter(&self, c: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for v in x.iter_mut().take(c) {
            *v = 1.0 / c as f64;
        }
        x
    }

    /// `δ(x)` computed from the coordinates of every vertex, one at a time.
    pub fn delta(&self, x: &[f64], rho: Norm) -> Result<f64> {
        crate::error::check_dim(self.n, x.len())?;
        let mut e = vec![0.0; self.n];
        let mut d = Vec::with_capacity(self.n);
        for i in 0..self.n {
            e[i] = 1.0;
            d.push(crate::linalg::dist(&e, x));
            e[i] = 0.0;
        }
        Ok(aggregate(&d, rho))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimplexBound {
    pub n: usize,
    pub c: usize,
    pub rho: Norm,
    pub delta_o: f64,
    pub delta_oprime: f64,
    pub ratio: f64,
    pub numeric_delta_o: f64,
    pub numeric_delta_oprime: f64,
    /// Both analytic values agree with the numeric ones to [`SIMPLEX_CHECK_TOL`].
    pub verified: bool,
}

impl SimplexBound {
    /// Whether a face on `c` vertices fails to contain a `(1+ε)`-approximate center.
    pub fn excludes(&self, epsilon: f64) -> bool {
        self.ratio > 1.0 + epsilon
    }
}

/// Optimal center value against the best center in the span of `c` vertices.
///
/// `δ(o) = n^{1/ρ} √((n−1)/n)` at the barycenter `o`, and
/// `δ(o′) = (c ((c−1)/c)^{ρ/2} + (n−c) ((c+1)/c)^{ρ/2})^{1/ρ}` at the
/// barycenter `o′` of the first `c` vertices.
pub fn simplex_lower_bound(n: usize, c: usize, rho: Norm) -> Result<SimplexBound> {
    let Norm::Finite(r) = rho else {
        return Err(Error::Unsupported("the simplex bound needs a finite rho".into()));
    };
    if c == 0 || c >= n {
        return Err(invalid(format!("need 1 <= c < n, got c = {c}, n = {n}")));
    }
    let (nf, cf, r) = (n as f64, c as f64, r as f64);
    let delta_o = nf.powf(1.0 / r) * ((nf - 1.0) / nf).sqrt();
    let inside = ((cf - 1.0) / cf).powf(r / 2.0);
    let outside = ((cf + 1.0) / cf).powf(r / 2.0);
    let delta_oprime = (cf * inside + (nf - cf) * outside).powf(1.0 / r);

    let inst = SimplexInstance::new(n)?;
    let numeric_delta_o = inst.delta(&vec![1.0 / nf; n], rho)?;
    let numeric_delta_oprime = inst.delta(&inst.face_barycenter(c), rho)?;
    let close = |a: f64, b: f64| (a - b).abs() <= SIMPLEX_CHECK_TOL * a.abs().max(1.0);
    Ok(SimplexBound {
        n,
        c,
        rho,
        delta_o,
        delta_oprime,
        ratio: delta_oprime / delta_o,
        numeric_delta_o,
        numeric_delta_oprime,
        verified: close(delta_o, numeric_delta_o) && close(delta_oprime, numeric_delta_oprime),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::center_objective;

    #[test]
    fn small_instance() {
        let b = simplex_lower_bound(4, 2, Norm::TWO).unwrap();
        assert!((b.delta_oprime - 2.0).abs() < 1e-12);
        assert!((b.delta_o - 3f64.sqrt()).abs() < 1e-12);
        assert!((b.ratio - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(b.verified);
        let inst = SimplexInstance::new(4).unwrap();
        let o = inst.face_barycenter(2);
        assert_eq!(o, vec![0.5, 0.5, 0.0, 0.0]);
        let p = inst.points();
        assert!((crate::linalg::dist(p.point(2), &o) - 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn streaming_matches_objective() {
        let inst = SimplexInstance::new(30).unwrap();
        let p = inst.points();
        let x = inst.face_barycenter(7);
        for rho in [Norm::ONE, Norm::TWO, Norm::Finite(5), Norm::Infinity] {
            let a = inst.delta(&x, rho).unwrap();
            let b = center_objective(&p, &x, rho).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn near_full_face() {
        let r: Vec<f64> = [10, 100, 1000]
            .iter()
            .map(|&n| simplex_lower_bound(n, n - 1, Norm::TWO).unwrap().ratio)
            .collect();
        assert!(r[0] > r[1] && r[1] > r[2] && r[2] - 1.0 < 1e-3);
    }

    #[test]
    fn other_norms_verify() {
        for rho in [Norm::ONE, Norm::Finite(3)] {
            assert!(simplex_lower_bound(50, 5, rho).unwrap().verified);
        }
        assert!(simplex_lower_bound(50, 5, Norm::Infinity).is_err());
        assert!(simplex_lower_bound(5, 5, Norm::TWO).is_err());
    }
}
