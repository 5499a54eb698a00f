//! Solvers for `f_k^q(P, rho)`: the cost of the best `k` q-flats.
//!
//! [`brute_force_optimal`] is exact on tiny inputs and serves as the oracle.
//! The heuristics scale to desk-sized inputs.

mod brute_force;
pub(crate) mod heuristics;
mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Result};
use crate::geometry::{aggregate, nearest_flat, Norm, PointSet, QFlat};

pub use brute_force::{brute_force_optimal, BRUTE_FORCE_MAX_K, BRUTE_FORCE_MAX_POINTS};
pub use heuristics::{alternating_qflat, k_center_greedy, lloyd_kmeans, AlternatingOptions, DEFAULT_RESTARTS};
pub use verify::{verify_objective_preservation, PreservationReport};

/// Number of flats, their dimension, and the norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub k: usize,
    pub q: usize,
    pub rho: Norm,
}

impl ProblemSpec {
    pub fn new(k: usize, q: usize, rho: Norm) -> Result<Self> {
        if k == 0 {
            return Err(invalid("k must be at least 1"));
        }
        if rho == Norm::Finite(0) {
            return Err(invalid("rho must be at least 1"));
        }
        Ok(Self { k, q, rho })
    }

    pub(crate) fn check(&self, points: &PointSet) -> Result<()> {
        Self::new(self.k, self.q, self.rho)?;
        if self.q >= points.dim() {
            return Err(invalid(format!("q = {} must be below the dimension {}", self.q, points.dim())));
        }
        Ok(())
    }
}

/// Flats, the induced nearest-flat assignment, and the objective value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringSolution {
    pub flats: Vec<QFlat>,
    pub assignment: Vec<usize>,
    pub value: f64,
}

impl ClusteringSolution {
    /// Assigns every point to its nearest flat (lowest index on ties) and
    /// evaluates the objective from scratch.
    pub fn evaluate(points: &PointSet, flats: Vec<QFlat>, rho: Norm) -> Result<Self> {
        if flats.is_empty() {
            return Err(invalid("a solution needs at least one flat"));
        }
        for f in &flats {
            check_dim(points.dim(), f.dim())?;
        }
        let (assignment, distances): (Vec<usize>, Vec<f64>) = points.iter().map(|p| nearest_flat(p, &flats)).unzip();
        let value = aggregate(&distances, rho);
        Ok(Self { flats, assignment, value })
    }

    /// Members of each cluster, in input order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.flats.len()];
        for (i, &a) in self.assignment.iter().enumerate() {
            out[a].push(i);
        }
        out
    }

    pub fn report(&self, spec: ProblemSpec) -> SolutionReport<'_> {
        SolutionReport { spec, value: self.value, flats: &self.flats, assignment: &self.assignment }
    }
}

/// Serializable view of a solution together with its problem.
#[derive(Debug, Serialize)]
pub struct SolutionReport<'a> {
    pub spec: ProblemSpec,
    pub value: f64,
    pub flats: &'a [QFlat],
    pub assignment: &'a [usize],
}

/// Solver selection for places that take the solver as configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    /// Brute force when supported, otherwise the matching heuristic.
    #[default]
    Auto,
    BruteForce,
    KCenter,
    Lloyd,
    Alternating,
}

impl Solver {
    pub fn solve(self, points: &PointSet, spec: ProblemSpec, seed: u64) -> Result<ClusteringSolution> {
        spec.check(points)?;
        match self {
            Solver::Auto => {
                if brute_force::supports(points, spec) {
                    brute_force_optimal(points, spec)
                } else if spec.q == 0 && spec.rho == Norm::Infinity && spec.k <= points.len() {
                    k_center_greedy(points, spec.k)
                } else if spec.q == 0 && spec.rho == Norm::TWO && spec.k <= points.len() {
                    lloyd_kmeans(points, spec.k, seed, heuristics::DEFAULT_MAX_ITERS)
                } else {
                    alternating_qflat(points, spec, seed, AlternatingOptions::default())
                }
            }
            Solver::BruteForce => brute_force_optimal(points, spec),
            Solver::KCenter => {
                if spec.q != 0 || spec.rho != Norm::Infinity {
                    return Err(invalid("k-center greedy solves q = 0, rho = inf only"));
                }
                k_center_greedy(points, spec.k)
            }
            Solver::Lloyd => {
                if spec.q != 0 || spec.rho != Norm::TWO {
                    return Err(invalid("Lloyd's method solves q = 0, rho = 2 only"));
                }
                lloyd_kmeans(points, spec.k, seed, heuristics::DEFAULT_MAX_ITERS)
            }
            Solver::Alternating => alternating_qflat(points, spec, seed, AlternatingOptions::default()),
        }
    }
}

impl std::str::FromStr for Solver {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Solver::Auto,
            "brute-force" => Solver::BruteForce,
            "k-center" => Solver::KCenter,
            "lloyd" => Solver::Lloyd,
            "alternating" => Solver::Alternating,
            _ => return Err(invalid(format!("unknown solver {s:?}"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::objective;

    #[test]
    fn evaluate_matches_objective() {
        let p = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [10.0, 0.0], [11.0, 0.0]]).unwrap();
        let flats = vec![QFlat::point(vec![0.5, 0.0]), QFlat::point(vec![10.5, 0.0])];
        let s = ClusteringSolution::evaluate(&p, flats.clone(), Norm::Infinity).unwrap();
        assert_eq!(s.assignment, vec![0, 0, 1, 1]);
        assert_eq!(s.value, 0.5);
        assert_eq!(s.value, objective(&p, &flats, Norm::Infinity).unwrap());
        assert_eq!(s.clusters(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn ties_go_to_lowest_flat() {
        let p = PointSet::from_rows(&[[0.0]]).unwrap();
        let s = ClusteringSolution::evaluate(&p, vec![QFlat::point(vec![1.0]), QFlat::point(vec![-1.0])], Norm::TWO).unwrap();
        assert_eq!(s.assignment, vec![0]);
    }

    #[test]
    fn spec_validation() {
        assert!(ProblemSpec::new(0, 0, Norm::TWO).is_err());
        let p = PointSet::from_rows(&[[0.0, 1.0]]).unwrap();
        assert!(ProblemSpec::new(1, 2, Norm::TWO).unwrap().check(&p).is_err());
        assert!("lloyd".parse::<Solver>().is_ok());
        assert!("nope".parse::<Solver>().is_err());
    }
}
