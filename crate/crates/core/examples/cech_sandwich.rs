//! Čech filtration radii before and after projection.

use flatsketch::cech::{build_cech, sandwich_dimension, verify_sandwich};
use flatsketch::projection::{gaussian_points, ProjectionMap};

fn main() -> flatsketch::Result<()> {
    let (n, d, s_max, eps, c) = (25, 400, 3, 0.4, 2.0);
    let points = gaussian_points(n, d, 4, 0);

    let complex = build_cech(&points, s_max)?;
    println!("{} simplices up to dimension {s_max}, monotone: {}", complex.len(), complex.monotonicity_violations().is_empty());
    let alpha = complex.simplices.iter().map(|s| s.radius).sum::<f64>() / complex.len() as f64;
    println!("{} simplices at alpha = {alpha:.3}", complex.at(alpha).count());

    let m = sandwich_dimension(n, d, eps, 1.0, 1.0)?;
    println!("\nformula dimension (capped at d): {m}");
    for m in [m, 200, 60, 10] {
        let r = verify_sandwich(&points, &ProjectionMap::new(d, m, 9)?, s_max, eps, c)?;
        println!(
            "m={m:>3}: ratios [{:.3}, {:.3}], band violations {:>5}, band ok {}, inclusions ok {}",
            r.ratio_min, r.ratio_max, r.violations, r.pass, r.inclusions_hold
        );
    }

    let mut table = Vec::new();
    build_cech(&points.subset(&[0, 1, 2])?, 2)?.write_table(&mut table)?;
    print!("\n{}", String::from_utf8_lossy(&table));
    Ok(())
}
