//! Pairwise, subspace and point-to-flat distortion of one random projection.

use flatsketch::projection::{
    gaussian_points, verify_flat_distance_distortion, verify_pairwise_distortion, verify_subspace_distortion,
    FlatCheck, ProjectionMap, SubspaceCheck,
};

fn main() -> flatsketch::Result<()> {
    let (n, d, m, seed) = (150, 600, 120, 7);
    let points = gaussian_points(n, d, seed, 0);
    let map = ProjectionMap::new(d, m, seed)?;
    println!("{n} points, d={d} -> m={m}, scale {:.4}", map.scale());

    let pairs = verify_pairwise_distortion(&points, &map, 0.3)?;
    println!(
        "pairwise squared distances: {} pairs, ratios in [{:.4}, {:.4}], pass at 0.3: {}",
        pairs.pairs_checked, pairs.ratios.min, pairs.ratios.max, pairs.pass
    );

    let sub = verify_subspace_distortion(&points, &map, SubspaceCheck { c: 3, epsilon: 0.3, trials: 200, pairs_per_trial: 10, seed })?;
    println!("span of 3 points: ratios in [{:.4}, {:.4}], pass: {}", sub.ratios.min, sub.ratios.max, sub.pass);

    let flats = verify_flat_distance_distortion(&points, &map, FlatCheck { c: 3, q: 1, epsilon: 0.3, trials: 100, seed })?;
    println!(
        "lines in the span of 3 points: ratios in [{:.4}, {:.4}], {} points on the line, pass: {}",
        flats.ratios.min, flats.ratios.max, flats.zero_distance, flats.pass
    );

    // m = d is the identity
    let id = ProjectionMap::new(d, d, seed)?;
    println!("m = d identity: {}", id.is_identity());
    Ok(())
}
