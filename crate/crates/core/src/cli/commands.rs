use std::path::PathBuf;

use serde::Serialize;

use crate::cli::{
    to_json, verify, ClusterArgs, Command, CoresetArgs, Method, Outcome, ProjectArgs, StreamArgs,
};
use crate::clustering::{brute_force_optimal, ClusteringSolution, ProblemSpec};
use crate::coresets::{
    frank_wolfe_coreset, greedy_center_coreset, meb_coreset, optimal_center, Coreset, DELTA_REL_TOL,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::{center_objective, Norm, PointSet, QFlat};
use crate::io::{read_points, write_points, RowReader};
use crate::pipeline::{cluster_via_projection, PipelineConfig, Refit, SpaceLedger, StreamConfig, StreamState};
use crate::projection::{DimensionBudget, ProjectionMap};

#[derive(Serialize)]
struct Report<'a, T> {
    config: &'a Command,
    #[serde(flatten)]
    body: T,
}

fn outcome<T: Serialize>(config: &Command, body: T, pass: bool) -> Result<Outcome> {
    Ok(Outcome { report: to_json(&Report { config, body })?, pass })
}

pub(crate) fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Project(a) => project(cmd, a),
        Command::Coreset(a) => coreset(cmd, a),
        Command::Cluster(a) => cluster(cmd, a),
        Command::Stream(a) => stream(cmd, a),
        Command::Verify(a) => verify::run(cmd, a),
    }
}

#[derive(Serialize)]
struct ProjectReport<'a> {
    n: usize,
    d: usize,
    m: usize,
    seed: u64,
    formula: DimensionBudget,
    formula_dim: usize,
    overridden: bool,
    output: &'a PathBuf,
}

fn project(cmd: &Command, a: &ProjectArgs) -> Result<Outcome> {
    let points = read_points(&a.input)?;
    let (n, d) = (points.len(), points.dim());
    let formula = DimensionBudget::new(n, a.dim.q, a.dim.epsilon, a.dim.rho)?.with_constants(a.dim.lambda, a.dim.coreset_constant)?;
    let formula_dim = formula.dimension();
    let m = a.dim.m.unwrap_or(formula_dim).min(d);
    let map = ProjectionMap::new(d, m, a.dim.seed)?;
    write_points(&map.project(&points)?, &a.output)?;
    if let Some(path) = &a.matrix {
        map.save(path)?;
    }
    let body = ProjectReport { n, d, m, seed: a.dim.seed, formula, formula_dim, overridden: a.dim.m.is_some(), output: &a.output };
    outcome(cmd, body, true)
}

#[derive(Serialize)]
struct CoresetReport<'a> {
    n: usize,
    d: usize,
    size: usize,
    indices: &'a [usize],
    witness: &'a [f64],
    /// `δ(o)` of the oracle center.
    oracle_value: f64,
    /// `δ(witness)`.
    witness_value: f64,
    ratio: f64,
    /// The quantity the construction bounds and its bound.
    guarantee: &'static str,
    measured: f64,
    bound: f64,
    hull_residual: f64,
    certified: bool,
}

fn coreset(cmd: &Command, a: &CoresetArgs) -> Result<Outcome> {
    match (a.method, a.rho) {
        (Method::Fw, r) if r != Norm::TWO => return Err(invalid("method fw needs --rho 2")),
        (Method::Meb, r) if r != Norm::Infinity => return Err(invalid("method meb needs --rho inf")),
        _ => {}
    }
    let points = read_points(&a.input)?;
    let oracle = optimal_center(&points, a.rho)?;
    let eps = a.epsilon;
    let c: Coreset = match a.method {
        Method::Greedy => greedy_center_coreset(&points, a.rho, eps, &oracle)?,
        Method::Fw => frank_wolfe_coreset(&points, eps)?,
        Method::Meb => meb_coreset(&points, eps)?,
    };
    let witness_value = center_objective(&points, &c.witness, a.rho)?;
    let slack = 1.0 + DELTA_REL_TOL;
    let (guarantee, measured, bound) = match a.method {
        Method::Greedy => ("delta(witness) <= (1+eps) delta(o)", witness_value, (1.0 + eps) * oracle.value * slack),
        Method::Fw => (
            "g(witness) <= (1+16 eps) g(o)",
            witness_value * witness_value,
            (1.0 + 16.0 * eps) * oracle.value * oracle.value * slack,
        ),
        Method::Meb => ("max distance <= (1+eps) meb radius", witness_value, (1.0 + eps) * oracle.value * slack),
    };
    if let Some(path) = &a.output {
        std::fs::write(path, c.to_record())?;
    }
    let body = CoresetReport {
        n: points.len(),
        d: points.dim(),
        size: c.len(),
        indices: &c.indices,
        witness: &c.witness,
        oracle_value: oracle.value,
        witness_value,
        ratio: if oracle.value == 0.0 { 1.0 } else { witness_value / oracle.value },
        guarantee,
        measured,
        bound,
        hull_residual: c.hull_residual(&points),
        certified: measured <= bound,
    };
    let pass = body.certified;
    outcome(cmd, body, pass)
}

#[derive(Serialize)]
struct Stages {
    target_dim: usize,
    epsilon_prime: f64,
    projected_value: f64,
    naive_lift_value: f64,
    refit_gain: f64,
}

#[derive(Serialize)]
struct Gap {
    optimum: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct ClusterReport<'a> {
    spec: ProblemSpec,
    n: usize,
    d: usize,
    value: f64,
    flats: &'a [QFlat],
    assignment: &'a [usize],
    pipeline: Option<Stages>,
    brute_force: Option<Gap>,
}

fn cluster(cmd: &Command, a: &ClusterArgs) -> Result<Outcome> {
    let points = read_points(&a.input)?;
    let spec = ProblemSpec::new(a.k, a.dim.q, a.dim.rho)?;
    spec.check(&points)?;
    let (solution, pipeline): (ClusteringSolution, Option<Stages>) = if a.via_projection {
        let cfg = PipelineConfig {
            spec,
            epsilon: a.dim.epsilon,
            seed: a.dim.seed,
            solver: a.solver,
            refit: Refit::Auto,
            lambda: a.dim.lambda,
            coreset_constant: a.dim.coreset_constant,
            target_dim: a.dim.m,
        };
        let out = cluster_via_projection(&points, &cfg)?;
        let stages = Stages {
            target_dim: out.target_dim,
            epsilon_prime: out.epsilon_prime,
            projected_value: out.projected_value,
            naive_lift_value: out.naive_lift_value,
            refit_gain: out.refit_gain(),
        };
        (out.solution, Some(stages))
    } else {
        (a.solver.solve(&points, spec, a.dim.seed)?, None)
    };
    let brute_force = match brute_force_optimal(&points, spec) {
        Ok(opt) => Some(Gap {
            optimum: opt.value,
            ratio: if opt.value == 0.0 { 1.0 } else { solution.value / opt.value },
        }),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let body = ClusterReport {
        spec,
        n: points.len(),
        d: points.dim(),
        value: solution.value,
        flats: &solution.flats,
        assignment: &solution.assignment,
        pipeline,
        brute_force,
    };
    outcome(cmd, body, true)
}

#[derive(Serialize)]
struct StreamReport {
    spec: ProblemSpec,
    value: f64,
    declared_n: usize,
    seen: usize,
    m: usize,
    ledger: SpaceLedger,
    /// More points arrived than declared; the dimension no longer covers them.
    guarantee_void: bool,
}

fn stream(cmd: &Command, a: &StreamArgs) -> Result<Outcome> {
    let spec = ProblemSpec::new(a.k, a.dim.q, a.dim.rho)?;
    let mut rows = RowReader::open(&a.input)?;
    let first = rows.next().transpose()?;
    let mut state = match &a.resume {
        Some(base) => StreamState::load_checkpoint(base)?,
        None => {
            let d = first.as_ref().ok_or(Error::Empty)?.len();
            let mut cfg = StreamConfig::new(d, a.n, a.dim.q, a.dim.epsilon, a.dim.rho, a.dim.seed);
            cfg.lambda = a.dim.lambda;
            cfg.coreset_constant = a.dim.coreset_constant;
            cfg.target_dim = a.dim.m;
            StreamState::new(&cfg)?
        }
    };
    if let Some(p) = first {
        state.ingest(&p)?;
        state.ingest_results(rows)?;
    }
    if let Some(base) = &a.checkpoint {
        state.save_checkpoint(base)?;
    }
    let points: PointSet = state.buffer().points()?;
    spec.check(&points)?;
    let value = state.query(spec, a.solver, a.dim.seed)?;
    let body = StreamReport {
        spec,
        value,
        declared_n: state.declared_n(),
        seen: state.seen(),
        m: state.map().target_dim(),
        ledger: state.space_report(),
        guarantee_void: state.guarantee_void(),
    };
    if body.guarantee_void {
        eprintln!("warning: stream has {} points, more than the declared {}", body.seen, body.declared_n);
    }
    outcome(cmd, body, true)
}
