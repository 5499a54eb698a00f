//! Project, solve in the image, lift back, and compare with solving directly.

use flatsketch::clustering::{brute_force_optimal, ProblemSpec, Solver};
use flatsketch::pipeline::{cluster_via_projection, PipelineConfig};
use flatsketch::projection::gaussian_points;
use flatsketch::{Norm, PointSet};

fn blobs(per: usize, d: usize, seed: u64) -> flatsketch::Result<PointSet> {
    let noise = gaussian_points(3 * per, d, seed, 0);
    let mut rows = Vec::new();
    for (i, p) in noise.iter().enumerate() {
        let shift = 6.0 * (i / per) as f64;
        rows.push(p.iter().enumerate().map(|(j, x)| x + if j % 3 == i / per { shift } else { 0.0 }).collect::<Vec<_>>());
    }
    PointSet::from_rows(&rows)
}

fn main() -> flatsketch::Result<()> {
    let points = blobs(200, 500, 11)?;
    for (q, rho) in [(0, Norm::TWO), (0, Norm::Infinity), (1, Norm::TWO)] {
        let spec = ProblemSpec::new(3, q, rho)?;
        let mut cfg = PipelineConfig::new(spec, 0.5, 1);
        cfg.target_dim = Some(40);
        let out = cluster_via_projection(&points, &cfg)?;
        let direct = Solver::Auto.solve(&points, spec, 1)?.value;
        println!(
            "k=3 q={q} rho={rho}: m={} projected {:.2}, naive lift {:.2}, refit {:.2}, direct {:.2}",
            out.target_dim, out.projected_value, out.naive_lift_value, out.value(), direct
        );
    }

    // on a tiny input the exact optimum is available
    let tiny = gaussian_points(10, 60, 5, 0);
    let spec = ProblemSpec::new(2, 0, Norm::TWO)?;
    let opt = brute_force_optimal(&tiny, spec)?.value;
    let mut cfg = PipelineConfig::new(spec, 0.5, 2);
    cfg.target_dim = Some(12);
    let out = cluster_via_projection(&tiny, &cfg)?;
    println!("\ntiny: optimum {opt:.4}, via m=12 {:.4} (ratio {:.4})", out.value(), out.value() / opt);
    Ok(())
}
