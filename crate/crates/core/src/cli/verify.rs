use clap::ValueEnum;
use serde::Serialize;

use crate::cech::{sandwich_dimension, verify_sandwich};
use crate::cli::{to_json, Command, Outcome, VerifyArgs};
use crate::clustering::{verify_objective_preservation, ProblemSpec};
use crate::coresets::{simplex_lower_bound, SimplexBound};
use crate::error::{invalid, Result};
use crate::geometry::PointSet;
use crate::io::read_points;
use crate::projection::{
    flat_distance_dimension, gaussian_points, jl_dimension, subspace_dimension, verify_flat_distance_distortion,
    verify_pairwise_distortion, verify_subspace_distortion, DimensionBudget, FlatCheck, ProjectionMap, SubspaceCheck,
};

/// Vector pairs per sampled subset in the subspace suite.
const PAIRS_PER_SUBSET: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Pairwise distances.
    Jl,
    /// Distances between vectors in the span of c points.
    Subspace,
    /// Point-to-flat distances for flats in the span of c points.
    Flats,
    /// Exact clustering optima before and after projection.
    Objective,
    /// Čech filtration radii.
    Cech,
    /// The simplex lower-bound instance.
    SimplexLb,
}

#[derive(Serialize)]
struct Trial<R> {
    seed: u64,
    pass: bool,
    report: R,
}

#[derive(Serialize)]
struct SuiteReport<'a, R> {
    config: &'a Command,
    suite: Suite,
    n: usize,
    d: usize,
    target_dim: usize,
    trials: Vec<Trial<R>>,
    passes: usize,
    required: usize,
    pass: bool,
}

#[derive(Serialize)]
struct BoundReport<'a> {
    config: &'a Command,
    suite: Suite,
    bound: SimplexBound,
    pass: bool,
}

/// Passing projections needed out of `trials`: nine in ten, rounded up.
pub(crate) fn required_passes(trials: usize) -> usize {
    (9 * trials).div_ceil(10)
}

fn trials<R: Serialize>(
    cmd: &Command,
    a: &VerifyArgs,
    points: &PointSet,
    m: usize,
    mut one: impl FnMut(&ProjectionMap) -> Result<(R, bool)>,
) -> Result<Outcome> {
    if a.trials == 0 {
        return Err(invalid("--trials must be positive"));
    }
    let d = points.dim();
    if m == 0 {
        return Err(invalid("target dimension must be positive"));
    }
    let m = m.min(d);
    let mut out = Vec::with_capacity(a.trials);
    for t in 0..a.trials {
        let seed = a.dim.seed.wrapping_add(t as u64);
        let (report, pass) = one(&ProjectionMap::new(d, m, seed)?)?;
        out.push(Trial { seed, pass, report });
    }
    let passes = out.iter().filter(|t| t.pass).count();
    let required = required_passes(a.trials);
    let body = SuiteReport {
        config: cmd,
        suite: a.suite,
        n: points.len(),
        d,
        target_dim: m,
        trials: out,
        passes,
        required,
        pass: passes >= required,
    };
    Ok(Outcome { report: to_json(&body)?, pass: body.pass })
}

pub(crate) fn run(cmd: &Command, a: &VerifyArgs) -> Result<Outcome> {
    let eps = a.dim.epsilon;
    if a.suite == Suite::SimplexLb {
        let b = simplex_lower_bound(a.n, a.c, a.dim.rho)?;
        let body = BoundReport { config: cmd, suite: a.suite, bound: b, pass: b.verified };
        return Ok(Outcome { report: to_json(&body)?, pass: b.verified });
    }
    let points = match &a.input {
        Some(path) => read_points(path)?,
        None => gaussian_points(a.n, a.d, a.dim.seed, 0),
    };
    let (n, d) = (points.len(), points.dim());
    match a.suite {
        Suite::Jl => {
            let m = a.dim.m.map_or_else(|| jl_dimension(n, eps), Ok)?;
            trials(cmd, a, &points, m, |map| {
                let r = verify_pairwise_distortion(&points, map, eps)?;
                let pass = r.pass;
                Ok((r, pass))
            })
        }
        Suite::Subspace => {
            let m = a.dim.m.map_or_else(|| subspace_dimension(n, a.c, eps, a.dim.lambda), Ok)?;
            trials(cmd, a, &points, m, |map| {
                let check = SubspaceCheck { c: a.c, epsilon: eps, trials: a.samples, pairs_per_trial: PAIRS_PER_SUBSET, seed: map.seed() };
                let r = verify_subspace_distortion(&points, map, check)?;
                let pass = r.pass;
                Ok((r, pass))
            })
        }
        Suite::Flats => {
            let m = a.dim.m.map_or_else(|| flat_distance_dimension(n, a.c, eps, a.dim.lambda), Ok)?;
            trials(cmd, a, &points, m, |map| {
                let check = FlatCheck { c: a.c, q: a.dim.q, epsilon: eps, trials: a.samples, seed: map.seed() };
                let r = verify_flat_distance_distortion(&points, map, check)?;
                let pass = r.pass;
                Ok((r, pass))
            })
        }
        Suite::Objective => {
            let spec = ProblemSpec::new(a.k, a.dim.q, a.dim.rho)?;
            let budget = DimensionBudget::new(n, a.dim.q, eps, a.dim.rho)?.with_constants(a.dim.lambda, a.dim.coreset_constant)?;
            let m = a.dim.m.unwrap_or_else(|| budget.dimension());
            trials(cmd, a, &points, m, |map| {
                let r = verify_objective_preservation(&points, map, spec, eps)?;
                Ok((r, r.pass))
            })
        }
        Suite::Cech => {
            let m = match a.dim.m {
                Some(m) => m,
                None => sandwich_dimension(n, d, eps, a.dim.lambda, a.dim.coreset_constant)?,
            };
            trials(cmd, a, &points, m, |map| {
                let r = verify_sandwich(&points, map, a.s_max, eps, a.c_slack)?;
                let pass = r.pass;
                Ok((r, pass))
            })
        }
        Suite::SimplexLb => unreachable!("handled above"),
    }
}
