use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{meb_of, PointSet};
use crate::io::format_value;

pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simplex {
    /// Vertex ids, increasing.
    pub vertices: Vec<usize>,
    /// Radius of the minimum enclosing ball of the vertices.
    pub radius: f64,
}

/// Every simplex with at most `s_max + 1` vertices, by size and then in
/// colexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilteredComplex {
    pub n: usize,
    pub s_max: usize,
    pub simplices: Vec<Simplex>,
}

/// `sum_{s=1}^{s_max+1} C(n, s)`, saturating.
pub fn simplex_count(n: usize, s_max: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for s in 1..=(s_max + 1).min(n) {
        binom = binom.saturating_mul((n + 1 - s) as u128) / s as u128;
        total = total.saturating_add(binom);
    }
    total
}

pub fn build_cech(points: &PointSet, s_max: usize) -> Result<FilteredComplex> {
    build_cech_with_budget(points, s_max, DEFAULT_BUDGET)
}

/// Fails with [`Error::BudgetExceeded`] if the complex would hold more
/// than `budget` simplices. Radii are computed in parallel; the order is
/// fixed regardless.
pub fn build_cech_with_budget(points: &PointSet, s_max: usize, budget: u128) -> Result<FilteredComplex> {
    if s_max == 0 {
        return Err(invalid("s_max must be at least 1"));
    }
    let n = points.len();
    let count = simplex_count(n, s_max);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let mut sets = Vec::with_capacity(count as usize);
    for size in 1..=(s_max + 1).min(n) {
        let mut c: Vec<usize> = (0..size).collect();
        loop {
            sets.push(c.clone());
            if !next_colex(&mut c, n) {
                break;
            }
        }
    }
    let simplices = sets
        .into_par_iter()
        .map(|vertices| {
            let rows: Vec<&[f64]> = vertices.iter().map(|&i| points.point(i)).collect();
            let radius = if rows.len() == 1 { 0.0 } else { meb_of(&rows).radius };
            Simplex { vertices, radius }
        })
        .collect();
    Ok(FilteredComplex { n, s_max, simplices })
}

/// Advances an increasing combination to its colexicographic successor.
fn next_colex(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in 0..k {
        let limit = if i + 1 < k { c[i + 1] } else { n };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (j, v) in c.iter_mut().enumerate().take(i) {
                *v = j;
            }
            return true;
        }
    }
    false
}

impl FilteredComplex {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Position of every simplex, for face lookups.
    fn index(&self) -> std::collections::HashMap<&[usize], usize> {
        self.simplices.iter().enumerate().map(|(i, s)| (s.vertices.as_slice(), i)).collect()
    }

    /// Pairs `(face, coface)` where removing one vertex from the coface
    /// lowers its radius. Empty for a valid filtration.
    pub fn monotonicity_violations(&self) -> Vec<(usize, usize)> {
        let index = self.index();
        let mut bad = Vec::new();
        for (i, s) in self.simplices.iter().enumerate() {
            if s.vertices.len() < 2 {
                continue;
            }
            for skip in 0..s.vertices.len() {
                let face: Vec<usize> =
                    s.vertices.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                let f = index[face.as_slice()];
                if self.simplices[f].radius > s.radius {
                    bad.push((f, i));
                }
            }
        }
        bad
    }

    /// The complex at filtration value `alpha`.
    pub fn at(&self, alpha: f64) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().filter(move |s| s.radius <= alpha)
    }

    /// One simplex per line: vertex ids separated by spaces, a tab, then the
    /// radius with 17 significant digits.
    pub fn write_table<W: Write>(&self, mut w: W) -> Result<()> {
        for s in &self.simplices {
            let ids: Vec<String> = s.vertices.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}\t{}", ids.join(" "), format_value(s.radius))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let pair = PointSet::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        assert_eq!(build_cech(&pair, 1).unwrap().simplices[2].radius, 1.0);
        let h = 3f64.sqrt() / 2.0;
        let tri = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.5, h]]).unwrap();
        let r = build_cech(&tri, 2).unwrap().simplices[6].radius;
        assert!((r - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let obtuse = PointSet::from_rows(&[[0.0, 0.0], [4.0, 0.0], [1.0, 0.1]]).unwrap();
        assert_eq!(build_cech(&obtuse, 2).unwrap().simplices[6].radius, 2.0);
    }

    #[test]
    fn colex_order() {
        let p = crate::projection::gaussian_points(4, 2, 0, 0);
        let c = build_cech(&p, 2).unwrap();
        let ids: Vec<Vec<usize>> = c.simplices.iter().map(|s| s.vertices.clone()).collect();
        let want: Vec<Vec<usize>> = vec![
            vec![0], vec![1], vec![2], vec![3],
            vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3],
            vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3],
        ];
        assert_eq!(ids, want);
        assert_eq!(simplex_count(4, 2), 14);
    }

    #[test]
    fn edges_are_half_lengths_and_monotone() {
        let p = crate::projection::gaussian_points(12, 7, 4, 0);
        let c = build_cech(&p, 3).unwrap();
        for s in c.simplices.iter().filter(|s| s.vertices.len() == 2) {
            assert_eq!(s.radius, crate::linalg::dist(p.point(s.vertices[0]), p.point(s.vertices[1])) / 2.0);
        }
        assert!(c.monotonicity_violations().is_empty());
        assert_eq!(c.len() as u128, simplex_count(12, 3));
    }

    #[test]
    fn scale_equivariance() {
        let p = crate::projection::gaussian_points(10, 5, 2, 0);
        let c = build_cech(&p, 3).unwrap();
        for s in [2.0, 0.25] {
            let cs = build_cech(&p.scaled(s), 3).unwrap();
            for (a, b) in c.simplices.iter().zip(&cs.simplices) {
                assert_eq!(b.radius, s * a.radius);
            }
        }
        let cs = build_cech(&p.scaled(3.0), 3).unwrap();
        for (a, b) in c.simplices.iter().zip(&cs.simplices) {
            assert!((b.radius - 3.0 * a.radius).abs() <= 1e-12 * b.radius);
        }
    }

    #[test]
    fn budget() {
        let p = crate::projection::gaussian_points(200, 2, 0, 0);
        match build_cech(&p, 3) {
            Err(Error::BudgetExceeded { count, budget }) => {
                assert_eq!(count, simplex_count(200, 3));
                assert_eq!(budget, DEFAULT_BUDGET);
            }
            other => panic!("{other:?}"),
        }
        assert!(build_cech(&p, 0).is_err());
    }

    #[test]
    fn table_format() {
        let p = PointSet::from_rows(&[[0.0], [3.0]]).unwrap();
        let mut out = Vec::new();
        build_cech(&p, 1).unwrap().write_table(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "0\t0.0000000000000000e0\n1\t0.0000000000000000e0\n0 1\t1.5000000000000000e0\n"
        );
    }
}
