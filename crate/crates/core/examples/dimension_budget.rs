//! How the target dimension grows with n, q and ε, and where it stops
//! beating the source dimension.

use flatsketch::projection::{flat_distance_dimension, jl_dimension, subspace_dimension, DimensionBudget};
use flatsketch::Norm;

fn main() -> flatsketch::Result<()> {
    println!("{:>8} {:>6} {:>8} {:>10} {:>10} {:>12}", "n", "eps", "jl", "subspace", "flats", "projective");
    for n in [100, 10_000, 1_000_000] {
        for eps in [0.5, 0.25, 0.1] {
            let proj = DimensionBudget::new(n, 0, eps, Norm::TWO)?.dimension();
            println!(
                "{n:>8} {eps:>6} {:>8} {:>10} {:>10} {proj:>12}",
                jl_dimension(n, eps)?,
                subspace_dimension(n, 3, eps, 1.0)?,
                flat_distance_dimension(n, 3, eps, 1.0)?,
            );
        }
    }

    // the coreset size bound grows as (q+1)^2
    println!();
    for q in 0..4 {
        let b = DimensionBudget::new(10_000, q, 0.5, Norm::TWO)?;
        println!("q={q}: coreset bound {:.1}, target dimension {}", b.coreset_size(), b.dimension());
    }

    // smaller constants shrink the budget linearly
    let tuned = DimensionBudget::new(10_000, 1, 0.5, Norm::TWO)?.with_constants(0.05, 0.5)?;
    println!("\nlambda=0.05, kappa=0.5, q=1: {} (capped at d=1000: {})", tuned.dimension(), tuned.clamped(1000));
    Ok(())
}
