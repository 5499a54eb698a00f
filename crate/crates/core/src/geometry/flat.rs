use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::geometry::{Norm, PointSet};
use crate::linalg::{self, axpy, dot};

/// Orthonormality tolerance for flat bases.
pub const BASIS_TOL: f64 = 1e-9;

/// An affine flat: `anchor + span(basis)` with an orthonormal basis.
///
/// An empty basis is a single point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QFlat {
    anchor: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl QFlat {
    pub fn point(anchor: Vec<f64>) -> Self {
        Self { anchor, basis: Vec::new() }
    }

    /// Validates orthonormality of `basis` and `q < d`.
    pub fn new(anchor: Vec<f64>, basis: Vec<Vec<f64>>) -> Result<Self> {
        let d = anchor.len();
        if d == 0 {
            return Err(invalid("flat anchor must have dimension at least 1"));
        }
        if basis.len() >= d {
            return Err(invalid(format!("flat dimension {} must be below ambient dimension {d}", basis.len())));
        }
        for (i, b) in basis.iter().enumerate() {
            check_dim(d, b.len())?;
            for (j, c) in basis.iter().enumerate().take(i + 1) {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (dot(b, c) - expect).abs() > BASIS_TOL {
                    return Err(invalid("flat basis is not orthonormal"));
                }
            }
        }
        Ok(Self { anchor, basis })
    }

    /// Orthonormalizes `directions` (dropping dependent ones).
    ///
    /// Unlike [`QFlat::new`], the result may span the whole ambient space,
    /// which happens when a flat is pushed through a projection to very few
    /// dimensions.
    pub fn from_directions(anchor: Vec<f64>, directions: &[Vec<f64>]) -> Result<Self> {
        for v in directions {
            check_dim(anchor.len(), v.len())?;
        }
        Ok(Self { basis: linalg::orthonormalize(directions), anchor })
    }

    pub(crate) fn from_parts_unchecked(anchor: Vec<f64>, basis: Vec<Vec<f64>>) -> Self {
        Self { anchor, basis }
    }

    pub fn anchor(&self) -> &[f64] {
        &self.anchor
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    /// The flat dimension `q`.
    pub fn q(&self) -> usize {
        self.basis.len()
    }

    /// `p - anchor` with the in-flat components removed.
    fn residual(&self, p: &[f64]) -> Vec<f64> {
        let mut r = linalg::sub(p, &self.anchor);
        for b in &self.basis {
            let c = dot(&r, b);
            axpy(-c, b, &mut r);
        }
        r
    }

    /// Orthogonal projection of `p` onto the flat.
    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), p.len())?;
        let r = self.residual(p);
        Ok(p.iter().zip(&r).map(|(x, y)| x - y).collect())
    }

    pub fn distance(&self, p: &[f64]) -> Result<f64> {
        check_dim(self.dim(), p.len())?;
        Ok(self.distance_unchecked(p))
    }

    pub(crate) fn distance_unchecked(&self, p: &[f64]) -> f64 {
        if self.basis.is_empty() {
            linalg::dist(p, &self.anchor)
        } else {
            linalg::norm(&self.residual(p))
        }
    }
}

pub fn point_to_flat_distance(p: &[f64], flat: &QFlat) -> Result<f64> {
    flat.distance(p)
}

/// Index and distance of the closest flat; ties go to the lowest index.
pub fn nearest_flat(p: &[f64], flats: &[QFlat]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, f) in flats.iter().enumerate() {
        let dist = f.distance_unchecked(p);
        if dist < best.1 {
            best = (i, dist);
        }
    }
    best
}

/// Combines per-point distances into the L_rho objective.
///
/// Sums run in input order. For rho > 2 the terms are rescaled by the largest
/// distance first so large exponents cannot overflow.
pub fn aggregate(distances: &[f64], rho: Norm) -> f64 {
    match rho {
        Norm::Infinity => distances.iter().copied().fold(0.0, f64::max),
        Norm::Finite(1) => distances.iter().sum(),
        Norm::Finite(2) => distances.iter().fold(0.0, |acc, d| acc + d * d).sqrt(),
        Norm::Finite(r) => {
            let top = distances.iter().copied().fold(0.0, f64::max);
            if top == 0.0 {
                return 0.0;
            }
            let r = r as i32;
            let s: f64 = distances.iter().map(|d| (d / top).powi(r)).sum();
            top * s.powf(1.0 / r as f64)
        }
    }
}

/// `(sum_p min_F d(p,F)^rho)^(1/rho)`, or the max for rho = infinity.
pub fn objective(points: &PointSet, flats: &[QFlat], rho: Norm) -> Result<f64> {
    if flats.is_empty() {
        return Err(invalid("objective needs at least one flat"));
    }
    for f in flats {
        check_dim(points.dim(), f.dim())?;
    }
    let distances: Vec<f64> = points.iter().map(|p| nearest_flat(p, flats).1).collect();
    Ok(aggregate(&distances, rho))
}

/// Objective of a single center point.
pub fn center_objective(points: &PointSet, center: &[f64], rho: Norm) -> Result<f64> {
    check_dim(points.dim(), center.len())?;
    let distances: Vec<f64> = points.iter().map(|p| linalg::dist(p, center)).collect();
    Ok(aggregate(&distances, rho))
}
