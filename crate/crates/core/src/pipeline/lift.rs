use serde::{Deserialize, Serialize};

use crate::clustering::heuristics::refit;
use crate::clustering::{ClusteringSolution, ProblemSpec, Solver};
use crate::error::{invalid, Result};
use crate::geometry::{aggregate, best_fit_flat_l2, PointSet, QFlat};
use crate::projection::{DimensionBudget, ProjectionMap, DEFAULT_CORESET_CONSTANT, DEFAULT_LAMBDA};

/// How a pre-image cluster gets its flat in the source space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Refit {
    /// Exact where a closed form exists, local improvement otherwise; never
    /// worse than the naively lifted flat.
    #[default]
    Auto,
    /// The least-squares flat, whatever the norm.
    BestFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub spec: ProblemSpec,
    pub epsilon: f64,
    pub seed: u64,
    pub solver: Solver,
    pub refit: Refit,
    pub lambda: f64,
    pub coreset_constant: f64,
    /// Replaces the computed target dimension; still capped at `d`.
    pub target_dim: Option<usize>,
}

impl PipelineConfig {
    pub fn new(spec: ProblemSpec, epsilon: f64, seed: u64) -> Self {
        Self {
            spec,
            epsilon,
            seed,
            solver: Solver::Auto,
            refit: Refit::Auto,
            lambda: DEFAULT_LAMBDA,
            coreset_constant: DEFAULT_CORESET_CONSTANT,
            target_dim: None,
        }
    }

    /// `ε/5`, the accuracy used for each of the three stages.
    pub fn epsilon_prime(&self) -> f64 {
        self.epsilon / 5.0
    }

    /// Target dimension for `n` points in `d` dimensions.
    pub fn target_dim_for(&self, n: usize, d: usize) -> Result<usize> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        match self.target_dim {
            Some(0) => Err(invalid("target dimension must be positive")),
            Some(m) => Ok(m.min(d)),
            None => Ok(DimensionBudget::new(n, self.spec.q, self.epsilon_prime(), self.spec.rho)?
                .with_constants(self.lambda, self.coreset_constant)?
                .clamped(d)),
        }
    }
}

/// Result of [`cluster_via_projection`], with the value after each stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineOutcome {
    pub config: PipelineConfig,
    pub source_dim: usize,
    pub target_dim: usize,
    pub epsilon_prime: f64,
    /// Solver value on the projected points.
    pub projected_value: f64,
    /// Source-space value of the pre-image clusters against the lifted
    /// projected flats.
    pub naive_lift_value: f64,
    /// The refitted solution in the source space.
    pub solution: ClusteringSolution,
}

impl PipelineOutcome {
    pub fn value(&self) -> f64 {
        self.solution.value
    }

    /// `naive_lift_value / value`: how much the refit recovered.
    pub fn refit_gain(&self) -> f64 {
        if self.solution.value == 0.0 {
            1.0
        } else {
            self.naive_lift_value / self.solution.value
        }
    }
}

/// Projects with accuracy `ε/5`, solves in the image, and refits one flat
/// per pre-image cluster in the source space.
///
/// Pre-images follow the solver's nearest-flat assignment (lowest index on
/// ties), so they are disjoint. Empty clusters keep their lifted flat.
pub fn cluster_via_projection(points: &PointSet, cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    cfg.spec.check(points)?;
    let d = points.dim();
    let m = cfg.target_dim_for(points.len(), d)?;
    let map = ProjectionMap::new(d, m, cfg.seed)?;
    let image = map.project(points)?;
    let projected = cfg.solver.solve(&image, cfg.spec, cfg.seed)?;

    let lifted: Vec<QFlat> = projected.flats.iter().map(|f| lift_to_q(&map, f, cfg.spec.q)).collect::<Result<_>>()?;
    let naive: Vec<f64> =
        points.iter().zip(&projected.assignment).map(|(p, &a)| lifted[a].distance_unchecked(p)).collect();
    let naive_lift_value = aggregate(&naive, cfg.spec.rho);

    let mut flats = lifted;
    for (j, members) in projected.clusters().iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        flats[j] = match cfg.refit {
            Refit::Auto => refit(points, members, cfg.spec, &flats[j])?,
            Refit::BestFit => best_fit_flat_l2(&points.subset(members)?, cfg.spec.q)?,
        };
    }
    let solution = ClusteringSolution::evaluate(points, flats, cfg.spec.rho)?;
    Ok(PipelineOutcome {
        config: *cfg,
        source_dim: d,
        target_dim: m,
        epsilon_prime: cfg.epsilon_prime(),
        projected_value: projected.value,
        naive_lift_value,
        solution,
    })
}

/// Lifted flat, padded with coordinate axes if lifting lost directions.
fn lift_to_q(map: &ProjectionMap, flat: &QFlat, q: usize) -> Result<QFlat> {
    let f = map.lift_flat(flat)?;
    if f.q() == q {
        return Ok(f);
    }
    let basis = crate::linalg::complete_with_axes(f.basis().to_vec(), f.dim(), q);
    QFlat::new(f.anchor().to_vec(), basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::brute_force_optimal;
    use crate::geometry::Norm;
    use crate::projection::gaussian_points;

    fn spec(k: usize, q: usize, rho: Norm) -> ProblemSpec {
        ProblemSpec::new(k, q, rho).unwrap()
    }

    #[test]
    fn identity_dimension_matches_direct_solve() {
        let p = gaussian_points(10, 6, 3, 0);
        let s = spec(2, 0, Norm::TWO);
        let mut cfg = PipelineConfig::new(s, 0.5, 7);
        cfg.target_dim = Some(6);
        let out = cluster_via_projection(&p, &cfg).unwrap();
        let direct = Solver::Auto.solve(&p, s, 7).unwrap();
        assert_eq!(out.value(), direct.value);
        assert_eq!(out.projected_value, direct.value);
    }

    #[test]
    fn single_center_is_centroid() {
        let p = gaussian_points(30, 20, 1, 0);
        let mut cfg = PipelineConfig::new(spec(1, 0, Norm::TWO), 0.5, 2);
        cfg.target_dim = Some(3);
        let out = cluster_via_projection(&p, &cfg).unwrap();
        assert_eq!(out.solution.flats[0].anchor(), p.centroid().as_slice());
    }

    #[test]
    fn refit_never_hurts() {
        for rho in [Norm::ONE, Norm::TWO, Norm::Finite(3), Norm::Infinity] {
            for q in [0, 1] {
                let p = gaussian_points(60, 30, 4, 0);
                let mut cfg = PipelineConfig::new(spec(3, q, rho), 0.5, 5);
                cfg.target_dim = Some(8);
                let out = cluster_via_projection(&p, &cfg).unwrap();
                assert!(out.value() <= out.naive_lift_value * (1.0 + 1e-12), "{rho} q={q}");
                assert_eq!(out.solution.flats.len(), 3);
                assert!(out.solution.flats.iter().all(|f| f.q() == q && f.dim() == 30));
            }
        }
    }

    #[test]
    fn close_to_optimum_with_projection() {
        let s = spec(2, 0, Norm::TWO);
        let eps = 0.5;
        let mut good = 0;
        for seed in 0..10 {
            let p = gaussian_points(10, 300, seed, 0);
            let mut cfg = PipelineConfig::new(s, eps, seed);
            cfg.target_dim = Some(DimensionBudget::new(10, 0, eps, Norm::TWO).unwrap().clamped(300));
            let out = cluster_via_projection(&p, &cfg).unwrap();
            let opt = brute_force_optimal(&p, s).unwrap().value;
            assert!(out.value() >= opt - 1e-9);
            if out.value() <= (1.0 + eps) * opt {
                good += 1;
            }
        }
        assert!(good >= 9, "{good}/10");
    }

    #[test]
    fn epsilon_checked() {
        let p = gaussian_points(5, 3, 0, 0);
        assert!(cluster_via_projection(&p, &PipelineConfig::new(spec(1, 0, Norm::TWO), 1.0, 0)).is_err());
    }
}
