//! One pass over a point stream with a checkpoint halfway through.

use flatsketch::clustering::{ProblemSpec, Solver};
use flatsketch::pipeline::{StreamConfig, StreamState};
use flatsketch::projection::gaussian_points;
use flatsketch::Norm;

fn main() -> flatsketch::Result<()> {
    let (n, d) = (2000, 300);
    let points = gaussian_points(n, d, 21, 0);
    let mut cfg = StreamConfig::new(d, n, 0, 0.5, Norm::TWO, 21);
    cfg.target_dim = Some(32);

    let mut state = StreamState::new(&cfg)?;
    let rows = points.rows();
    state.ingest_all(&rows[..n / 2])?;

    let dir = std::env::temp_dir().join(format!("flatsketch-stream-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let base = dir.join("half");
    state.save_checkpoint(&base)?;
    let mut resumed = StreamState::load_checkpoint(&base)?;
    resumed.ingest_all(&rows[n / 2..])?;
    std::fs::remove_dir_all(&dir)?;

    let spec = ProblemSpec::new(4, 0, Norm::TWO)?;
    let value = resumed.query(spec, Solver::Auto, 21)?;
    let ledger = resumed.space_report();
    println!("seen {} of {} declared, k-means value in the image {value:.3}", resumed.seen(), resumed.declared_n());
    println!(
        "stored: matrix {} + buffer {} = {} coordinates, against {} for the raw points",
        ledger.matrix_coords,
        ledger.buffer_coords,
        ledger.total,
        n * d
    );

    let mut over = StreamState::new(&StreamConfig { declared_n: 10, ..cfg })?;
    over.ingest_all(&rows[..20])?;
    println!("declared 10, pushed 20: guarantee void = {}", over.guarantee_void());
    Ok(())
}
