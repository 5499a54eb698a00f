//! The three coreset constructions, and the simplex instance that limits
//! how small a center coreset can be.

use flatsketch::coresets::{
    frank_wolfe_coreset, g_optimum, greedy_center_coreset, meb_coreset, optimal_center, simplex_lower_bound,
};
use flatsketch::geometry::{center_objective, meb};
use flatsketch::projection::gaussian_points;
use flatsketch::Norm;

fn main() -> flatsketch::Result<()> {
    let points = gaussian_points(200, 30, 3, 0);
    let eps = 0.1;

    for rho in [Norm::ONE, Norm::TWO, Norm::Finite(4), Norm::Infinity] {
        let oracle = optimal_center(&points, rho)?;
        let cs = greedy_center_coreset(&points, rho, eps, &oracle)?;
        let got = center_objective(&points, &cs.witness, rho)?;
        println!(
            "greedy rho={rho}: {} points, delta ratio {:.4}, hull residual {:.1e}",
            cs.len(),
            got / oracle.value,
            cs.hull_residual(&points)
        );
    }

    let fw = frank_wolfe_coreset(&points, eps)?;
    let g = fw.trace.last().map_or(f64::NAN, |r| r.value);
    println!("frank-wolfe: {} vertices, g ratio {:.4} after {} steps", fw.len(), g / g_optimum(&points), fw.trace.len() - 1);

    let mc = meb_coreset(&points, 0.2)?;
    let exact = meb(&points).radius;
    let r = points.iter().map(|p| p.iter().zip(&mc.witness).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()).fold(0.0, f64::max);
    println!("enclosing ball: {} points, radius ratio {:.4}", mc.len(), r / exact);

    print!("\nfirst trace rows of the greedy record:\n");
    let oracle = optimal_center(&points, Norm::TWO)?;
    let rec = greedy_center_coreset(&points, Norm::TWO, eps, &oracle)?.to_record();
    for line in rec.lines().skip(2).take(4) {
        println!("  {line}");
    }

    println!();
    for c in [5, 10, 20, 40] {
        let b = simplex_lower_bound(10_000, c, Norm::TWO)?;
        println!("simplex n=10^4, face of {c:>2}: ratio {:.5}, rules out eps=0.02: {}", b.ratio, b.excludes(0.02));
    }
    Ok(())
}
