//! Small dense vector helpers shared by every module.
//!
//! Everything here works on plain `f64` slices with a fixed left-to-right
//! summation order, so results are bit-stable across runs.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |acc, (x, y)| {
        let t = x - y;
        acc + t * t
    })
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `y += alpha * x`
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn scale(v: &mut [f64], s: f64) {
    for x in v {
        *x *= s;
    }
}

/// Relative rank tolerance used by every orthonormalization in the crate.
pub const RANK_TOL: f64 = 1e-10;

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Vectors whose residual falls below `RANK_TOL` times the largest input norm
/// are dropped, so the output is an orthonormal basis of the input span.
pub(crate) fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let largest = vectors.iter().map(|v| norm(v)).fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return Vec::new();
    }
    let threshold = RANK_TOL * largest;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _pass in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                axpy(-c, b, &mut w);
            }
        }
        let n = norm(&w);
        if n > threshold {
            scale(&mut w, 1.0 / n);
            basis.push(w);
        }
    }
    basis
}

/// Extends an orthonormal set with coordinate axes until it has `target` vectors.
pub(crate) fn complete_with_axes(mut basis: Vec<Vec<f64>>, dim: usize, target: usize) -> Vec<Vec<f64>> {
    let mut axis = 0;
    while basis.len() < target && axis < dim {
        let mut w = vec![0.0; dim];
        w[axis] = 1.0;
        axis += 1;
        for _pass in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                axpy(-c, b, &mut w);
            }
        }
        let n = norm(&w);
        if n > 1e-6 {
            scale(&mut w, 1.0 / n);
            basis.push(w);
        }
    }
    basis
}

/// Solves the symmetric positive definite system `a x = b` by Cholesky.
///
/// `a` is row-major `n x n`. Returns `None` when a pivot drops below
/// `tol` times the largest diagonal entry.
pub(crate) fn cholesky_solve(a: &[f64], b: &[f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    let max_diag = (0..n).map(|i| a[i * n + i]).fold(0.0_f64, f64::max);
    if max_diag <= 0.0 {
        return if n == 0 { Some(Vec::new()) } else { None };
    }
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= tol * max_diag {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}

/// Euclidean distance from `x` to the affine hull of `points`, by least squares.
pub(crate) fn affine_hull_residual(points: &[&[f64]], x: &[f64]) -> f64 {
    let Some((first, rest)) = points.split_first() else {
        return f64::INFINITY;
    };
    let dirs: Vec<Vec<f64>> = rest.iter().map(|p| sub(p, first)).collect();
    let basis = orthonormalize(&dirs);
    let mut r = sub(x, first);
    for _pass in 0..2 {
        for b in &basis {
            let c = dot(&r, b);
            axpy(-c, b, &mut r);
        }
    }
    norm(&r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_schmidt_drops_dependent_columns() {
        let v = vec![vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0], vec![1.0, 1.0, 0.0]];
        let b = orthonormalize(&v);
        assert_eq!(b.len(), 2);
        assert!(dot(&b[0], &b[1]).abs() < 1e-15);
        assert!((norm(&b[1]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn axes_completion_reaches_target() {
        let b = complete_with_axes(vec![vec![0.6, 0.8, 0.0]], 3, 3);
        assert_eq!(b.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&b[i], &b[j]) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_matches_hand_solution() {
        // [[4,2],[2,3]] x = [2,1] -> x = [0.5, 0]
        let x = cholesky_solve(&[4.0, 2.0, 2.0, 3.0], &[2.0, 1.0], 2, 1e-14).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15 && x[1].abs() < 1e-15);
        assert!(cholesky_solve(&[1.0, 1.0, 1.0, 1.0], &[1.0, 1.0], 2, 1e-12).is_none());
    }

    #[test]
    fn residual_to_segment_hull() {
        let a = [0.0, 0.0];
        let b = [2.0, 0.0];
        assert!((affine_hull_residual(&[&a, &b], &[5.0, 3.0]) - 3.0).abs() < 1e-15);
    }
}
