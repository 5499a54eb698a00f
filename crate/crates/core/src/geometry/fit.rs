use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{invalid, Result};
use crate::geometry::{PointSet, QFlat};
use crate::linalg::{self, complete_with_axes, orthonormalize};

/// The affine q-flat minimizing the sum of squared distances.
///
/// Anchor is the centroid, basis the top-q principal directions. When the
/// data has rank below q the basis is completed from coordinate axes.
pub fn best_fit_flat_l2(points: &PointSet, q: usize) -> Result<QFlat> {
    best_fit_flat_weighted(points, None, q)
}

/// Weighted variant: minimizes `sum_i w_i d(p_i, F)^2`.
pub fn best_fit_flat_weighted(points: &PointSet, weights: Option<&[f64]>, q: usize) -> Result<QFlat> {
    let d = points.dim();
    if q >= d {
        return Err(invalid(format!("flat dimension {q} must be below ambient dimension {d}")));
    }
    if let Some(w) = weights {
        if w.len() != points.len() || w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(invalid("weights must be finite, nonnegative, one per point"));
        }
    }
    let anchor = match weights {
        None => points.centroid(),
        Some(w) => weighted_centroid(points, w),
    };
    if q == 0 {
        return Ok(QFlat::point(anchor));
    }
    let basis = principal_directions(points, weights, &anchor, q);
    Ok(QFlat::from_parts_unchecked(anchor, basis))
}

fn weighted_centroid(points: &PointSet, w: &[f64]) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return points.centroid();
    }
    let mut c = vec![0.0; points.dim()];
    for (p, wi) in points.iter().zip(w) {
        linalg::axpy(*wi, p, &mut c);
    }
    for ci in &mut c {
        *ci /= total;
    }
    c
}

/// Top-q eigenvectors of the (weighted) scatter matrix around `anchor`.
///
/// Uses the n x n Gram matrix when n < d, the d x d scatter otherwise.
fn principal_directions(points: &PointSet, weights: Option<&[f64]>, anchor: &[f64], q: usize) -> Vec<Vec<f64>> {
    let n = points.len();
    let d = points.dim();
    let rows: Vec<Vec<f64>> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let s = weights.map_or(1.0, |w| w[i].sqrt());
            p.iter().zip(anchor).map(|(x, a)| s * (x - a)).collect()
        })
        .collect();
    let mut dirs = Vec::with_capacity(q);
    if n < d {
        let gram = DMatrix::from_fn(n, n, |i, j| linalg::dot(&rows[i], &rows[j]));
        let eig = SymmetricEigen::new(gram);
        let top = eig.eigenvalues.iter().copied().fold(0.0_f64, f64::max);
        for k in descending(eig.eigenvalues.as_slice()) {
            let sigma = eig.eigenvalues[k];
            if dirs.len() == q || sigma <= linalg::RANK_TOL * top {
                break;
            }
            let u = eig.eigenvectors.column(k);
            let mut v = vec![0.0; d];
            for (ui, r) in u.iter().zip(&rows) {
                linalg::axpy(*ui, r, &mut v);
            }
            linalg::scale(&mut v, 1.0 / sigma.sqrt());
            dirs.push(v);
        }
    } else {
        let scatter = DMatrix::from_fn(d, d, |a, b| rows.iter().fold(0.0, |acc, r| acc + r[a] * r[b]));
        let eig = SymmetricEigen::new(scatter);
        for k in descending(eig.eigenvalues.as_slice()).into_iter().take(q) {
            dirs.push(eig.eigenvectors.column(k).iter().copied().collect());
        }
    }
    let basis = orthonormalize(&dirs);
    complete_with_axes(basis, d, q)
}

fn descending(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx
}

/// Orthonormal basis of the linear span of the selected points.
pub fn span_basis(points: &PointSet, indices: &[usize]) -> Result<Vec<Vec<f64>>> {
    let vs = indices
        .iter()
        .map(|&i| {
            if i < points.len() {
                Ok(points.point(i).to_vec())
            } else {
                Err(invalid(format!("index {i} out of range for {} points", points.len())))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(orthonormalize(&vs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{objective, Norm};

    fn ps(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows).unwrap()
    }

    #[test]
    fn q0_is_centroid() {
        let p = ps(&[&[0.0, 0.0], &[2.0, 0.0]]);
        let f = best_fit_flat_l2(&p, 0).unwrap();
        assert_eq!(f.anchor(), &[1.0, 0.0]);
        assert_eq!(f.q(), 0);
    }

    #[test]
    fn collinear_points_fit_exactly() {
        let p = ps(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]]);
        let f = best_fit_flat_l2(&p, 1).unwrap();
        assert_eq!(f.anchor(), &[1.0, 1.0]);
        let b = &f.basis()[0];
        assert!((b[0].abs() - 0.5f64.sqrt()).abs() < 1e-12 && (b[0] - b[1]).abs() < 1e-12);
        assert!(objective(&p, &[f], Norm::TWO).unwrap() < 1e-12);
    }

    #[test]
    fn unit_square_line_fit_matches_brute_force() {
        let p = ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        let f = best_fit_flat_l2(&p, 1).unwrap();
        let v = objective(&p, &[f], Norm::TWO).unwrap();
        // oracle: scan lines at angle theta through offset t along the normal
        let mut best = f64::INFINITY;
        for a in 0..360 {
            let th = a as f64 * std::f64::consts::PI / 360.0;
            let nrm = [-th.sin(), th.cos()];
            for k in 0..=400 {
                let t = -1.0 + k as f64 * 0.005;
                let s: f64 = p.iter().map(|x| (x[0] * nrm[0] + x[1] * nrm[1] - t).powi(2)).sum();
                best = best.min(s.sqrt());
            }
        }
        assert!((best - 1.0).abs() < 1e-9);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q_at_least_d_is_rejected() {
        let p = ps(&[&[0.0, 0.0]]);
        assert!(best_fit_flat_l2(&p, 2).is_err());
    }

    #[test]
    fn degenerate_input_completes_basis() {
        let p = ps(&[&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]]);
        let f = best_fit_flat_l2(&p, 2).unwrap();
        assert_eq!(f.q(), 2);
        assert!(QFlat::new(f.anchor().to_vec(), f.basis().to_vec()).is_ok());
    }

    #[test]
    fn span_examples() {
        let p = ps(&[&[2.0, 0.0]]);
        assert_eq!(span_basis(&p, &[0]).unwrap(), vec![vec![1.0, 0.0]]);
        let p = ps(&[&[1.0, 0.0], &[2.0, 0.0]]);
        assert_eq!(span_basis(&p, &[0, 1]).unwrap().len(), 1);
        let p = ps(&[&[1.0, 0.0, 0.0], &[0.0, 3.0, 0.0]]);
        let b = span_basis(&p, &[0, 1]).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|v| v[2] == 0.0));
        assert!(span_basis(&p, &[5]).is_err());
    }

    #[test]
    fn residual_equals_trailing_eigenvalues() {
        use rand::Rng;
        let mut rng = crate::rng::stream(3, crate::rng::Purpose::Instances, 0);
        for (n, d) in [(20, 5), (4, 7)] {
            let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
            let p = PointSet::from_rows(&rows).unwrap();
            let c = p.centroid();
            let scatter = DMatrix::from_fn(d, d, |a, b| rows.iter().map(|r| (r[a] - c[a]) * (r[b] - c[b])).sum::<f64>());
            let mut ev: Vec<f64> = SymmetricEigen::new(scatter).eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            let total: f64 = ev.iter().sum();
            for q in 0..d {
                let f = best_fit_flat_l2(&p, q).unwrap();
                let got = objective(&p, &[f], Norm::TWO).unwrap().powi(2);
                let want: f64 = ev[..d - q].iter().map(|x| x.max(0.0)).sum();
                assert!((got - want).abs() <= 1e-6 * want.max(1e-9 * total), "n={n} d={d} q={q}: {got} vs {want}");
            }
        }
    }
}
