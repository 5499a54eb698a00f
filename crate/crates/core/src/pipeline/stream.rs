use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clustering::{ProblemSpec, Solver};
use crate::error::{Error, Result};
use crate::geometry::{Norm, PointSet};
use crate::projection::{DimensionBudget, ProjectionMap, DEFAULT_CORESET_CONSTANT, DEFAULT_LAMBDA};

pub const BUFFER_MAGIC: &[u8; 8] = b"FLATBUF\0";
pub const BUFFER_VERSION: u32 = 1;

/// Whatever the engine keeps about the projected stream.
///
/// [`BufferSketch`] keeps every projected point and runs an offline solver
/// on query. Any m-dimensional streaming solver can take its place.
pub trait StreamSketch {
    fn push(&mut self, projected: &[f64]) -> Result<()>;

    /// Objective estimate for `spec` on the projected stream so far.
    fn query(&self, spec: ProblemSpec, solver: Solver, seed: u64) -> Result<f64>;

    /// Coordinates held by the sketch.
    fn stored_coords(&self) -> usize;
}

/// All projected points, row-major.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BufferSketch {
    dim: usize,
    coords: Vec<f64>,
}

impl BufferSketch {
    pub fn new(dim: usize) -> Self {
        Self { dim, coords: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> Result<PointSet> {
        PointSet::new(self.dim, self.coords.clone())
    }
}

impl StreamSketch for BufferSketch {
    fn push(&mut self, projected: &[f64]) -> Result<()> {
        crate::error::check_dim(self.dim, projected.len())?;
        self.coords.extend_from_slice(projected);
        Ok(())
    }

    fn query(&self, spec: ProblemSpec, solver: Solver, seed: u64) -> Result<f64> {
        Ok(solver.solve(&self.points()?, spec, seed)?.value)
    }

    fn stored_coords(&self) -> usize {
        self.coords.len()
    }
}

/// Stream parameters. `declared_n` is the stream length known in advance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamConfig {
    pub dim: usize,
    pub declared_n: usize,
    pub q: usize,
    pub epsilon: f64,
    pub rho: Norm,
    pub seed: u64,
    pub lambda: f64,
    pub coreset_constant: f64,
    pub target_dim: Option<usize>,
}

impl StreamConfig {
    pub fn new(dim: usize, declared_n: usize, q: usize, epsilon: f64, rho: Norm, seed: u64) -> Self {
        Self {
            dim,
            declared_n,
            q,
            epsilon,
            rho,
            seed,
            lambda: DEFAULT_LAMBDA,
            coreset_constant: DEFAULT_CORESET_CONSTANT,
            target_dim: None,
        }
    }

    pub fn target_dim(&self) -> Result<usize> {
        match self.target_dim {
            Some(0) => Err(crate::error::invalid("target dimension must be positive")),
            Some(m) => Ok(m.min(self.dim)),
            None => Ok(DimensionBudget::new(self.declared_n, self.q, self.epsilon, self.rho)?
                .with_constants(self.lambda, self.coreset_constant)?
                .clamped(self.dim)),
        }
    }
}

/// Stored coordinates: the matrix, the sketch, and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpaceLedger {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub matrix_coords: usize,
    pub buffer_coords: usize,
    pub total: usize,
}

/// One-pass engine: projects each arriving point and hands it to the sketch.
#[derive(Debug, Clone)]
pub struct StreamState<S = BufferSketch> {
    map: ProjectionMap,
    declared_n: usize,
    seen: usize,
    scratch: Vec<f64>,
    sketch: S,
}

impl StreamState<BufferSketch> {
    pub fn new(cfg: &StreamConfig) -> Result<Self> {
        let map = ProjectionMap::new(cfg.dim, cfg.target_dim()?, cfg.seed)?;
        let m = map.target_dim();
        Ok(Self::with_sketch(map, cfg.declared_n, BufferSketch::new(m)))
    }

    /// Writes `<base>.proj` (the projection map) and `<base>.buf`.
    ///
    /// The buffer file is little-endian: magic `FLATBUF\0`, u32 version,
    /// u64 m, u64 declared n, u64 points seen, then the projected points.
    pub fn save_checkpoint(&self, base: impl AsRef<Path>) -> Result<()> {
        let (proj, buf) = checkpoint_paths(base.as_ref());
        self.map.save(proj)?;
        let mut w = BufWriter::new(File::create(buf)?);
        w.write_all(BUFFER_MAGIC)?;
        w.write_all(&BUFFER_VERSION.to_le_bytes())?;
        for v in [self.map.target_dim(), self.declared_n, self.seen] {
            w.write_all(&(v as u64).to_le_bytes())?;
        }
        for x in &self.sketch.coords {
            w.write_all(&x.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load_checkpoint(base: impl AsRef<Path>) -> Result<Self> {
        let (proj, buf) = checkpoint_paths(base.as_ref());
        let map = ProjectionMap::load(proj)?;
        let mut r = BufReader::new(File::open(buf)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != BUFFER_MAGIC {
            return Err(Error::Format("not a stream buffer file".into()));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        if u32::from_le_bytes(b4) != BUFFER_VERSION {
            return Err(Error::Format("unsupported stream buffer version".into()));
        }
        let mut b8 = [0u8; 8];
        let mut next = |r: &mut BufReader<File>| -> Result<usize> {
            r.read_exact(&mut b8)?;
            Ok(u64::from_le_bytes(b8) as usize)
        };
        let (m, declared_n, seen) = (next(&mut r)?, next(&mut r)?, next(&mut r)?);
        if m != map.target_dim() {
            return Err(Error::Format(format!("buffer has m = {m}, projection has m = {}", map.target_dim())));
        }
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != seen * m * 8 {
            return Err(Error::Format(format!("buffer holds {} bytes, expected {}", bytes.len(), seen * m * 8)));
        }
        let coords = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        let mut state = Self::with_sketch(map, declared_n, BufferSketch { dim: m, coords });
        state.seen = seen;
        Ok(state)
    }

    pub fn buffer(&self) -> &BufferSketch {
        &self.sketch
    }
}

fn checkpoint_paths(base: &Path) -> (PathBuf, PathBuf) {
    let with = |ext: &str| {
        let mut s = base.as_os_str().to_owned();
        s.push(ext);
        PathBuf::from(s)
    };
    (with(".proj"), with(".buf"))
}

impl<S: StreamSketch> StreamState<S> {
    pub fn with_sketch(map: ProjectionMap, declared_n: usize, sketch: S) -> Self {
        let m = map.target_dim();
        Self { map, declared_n, seen: 0, scratch: vec![0.0; m], sketch }
    }

    pub fn map(&self) -> &ProjectionMap {
        &self.map
    }

    pub fn seen(&self) -> usize {
        self.seen
    }

    pub fn declared_n(&self) -> usize {
        self.declared_n
    }

    /// More points arrived than declared, so the dimension bound no longer
    /// covers the stream.
    pub fn guarantee_void(&self) -> bool {
        self.seen > self.declared_n
    }

    pub fn ingest(&mut self, p: &[f64]) -> Result<()> {
        self.map.apply_into(p, &mut self.scratch)?;
        self.sketch.push(&self.scratch)?;
        self.seen += 1;
        Ok(())
    }

    /// Consumes the rows, reading each exactly once.
    pub fn ingest_all<I, P>(&mut self, rows: I) -> Result<()>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[f64]>,
    {
        for p in rows {
            self.ingest(p.as_ref())?;
        }
        Ok(())
    }

    /// Like [`ingest_all`](Self::ingest_all) for fallible sources such as
    /// [`RowReader`](crate::io::RowReader).
    pub fn ingest_results<I>(&mut self, rows: I) -> Result<()>
    where
        I: IntoIterator<Item = Result<Vec<f64>>>,
    {
        for p in rows {
            self.ingest(&p?)?;
        }
        Ok(())
    }

    pub fn query(&self, spec: ProblemSpec, solver: Solver, seed: u64) -> Result<f64> {
        if self.seen == 0 {
            return Err(Error::Empty);
        }
        self.sketch.query(spec, solver, seed)
    }

    pub fn space_report(&self) -> SpaceLedger {
        let (d, m) = (self.map.source_dim(), self.map.target_dim());
        let buffer_coords = self.sketch.stored_coords();
        SpaceLedger { n: self.seen, d, m, matrix_coords: d * m, buffer_coords, total: d * m + buffer_coords }
    }

    pub fn sketch(&self) -> &S {
        &self.sketch
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::gaussian_points;

    fn spec(k: usize, q: usize, rho: Norm) -> ProblemSpec {
        ProblemSpec::new(k, q, rho).unwrap()
    }

    #[test]
    fn identity_stream_matches_offline_raw() {
        let p = gaussian_points(20, 5, 0, 0);
        let mut cfg = StreamConfig::new(5, 20, 0, 0.5, Norm::TWO, 3);
        cfg.target_dim = Some(5);
        let mut st = StreamState::new(&cfg).unwrap();
        st.ingest_all(p.iter()).unwrap();
        let s = spec(3, 0, Norm::TWO);
        assert_eq!(st.query(s, Solver::Lloyd, 1).unwrap(), Solver::Lloyd.solve(&p, s, 1).unwrap().value);
    }

    #[test]
    fn equals_offline_projected_solve() {
        let p = gaussian_points(40, 30, 1, 0);
        let mut cfg = StreamConfig::new(30, 40, 0, 0.5, Norm::TWO, 9);
        cfg.target_dim = Some(7);
        let mut st = StreamState::new(&cfg).unwrap();
        st.ingest_all(p.iter()).unwrap();
        let image = ProjectionMap::new(30, 7, 9).unwrap().project(&p).unwrap();
        for s in [spec(2, 0, Norm::TWO), spec(3, 1, Norm::ONE), spec(4, 0, Norm::Infinity)] {
            let a = st.query(s, Solver::Auto, 2).unwrap();
            let b = Solver::Auto.solve(&image, s, 2).unwrap().value;
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(st.query(spec(40, 0, Norm::TWO), Solver::Lloyd, 0).unwrap(), 0.0);
    }

    #[test]
    fn order_insensitive_multiset() {
        let p = gaussian_points(10, 8, 2, 0);
        let mut cfg = StreamConfig::new(8, 10, 0, 0.5, Norm::TWO, 4);
        cfg.target_dim = Some(3);
        let mut a = StreamState::new(&cfg).unwrap();
        let mut b = StreamState::new(&cfg).unwrap();
        a.ingest_all(p.iter()).unwrap();
        b.ingest_all(p.iter().rev()).unwrap();
        let key = |s: &StreamState| {
            let mut rows: Vec<Vec<u64>> =
                s.buffer().points().unwrap().iter().map(|r| r.iter().map(|x| x.to_bits()).collect()).collect();
            rows.sort();
            rows
        };
        assert_eq!(key(&a), key(&b));
    }

    #[test]
    fn ledger_counts_every_step() {
        let (n, d) = (1000, 500);
        let cfg = StreamConfig::new(d, n, 1, 0.5, Norm::TWO, 0);
        let mut st = StreamState::new(&cfg).unwrap();
        let m = st.map().target_dim();
        assert_eq!(m, DimensionBudget::new(n, 1, 0.5, Norm::TWO).unwrap().clamped(d));
        assert_eq!(st.space_report().total, d * m);
        let p = gaussian_points(n, d, 0, 0);
        for (i, row) in p.iter().enumerate() {
            st.ingest(row).unwrap();
            let l = st.space_report();
            assert_eq!((l.matrix_coords, l.buffer_coords, l.total), (d * m, (i + 1) * m, (i + 1 + d) * m));
        }
        assert!(!st.guarantee_void());
        st.ingest(p.point(0)).unwrap();
        assert!(st.guarantee_void());
    }

    #[test]
    fn ledger_is_linear() {
        let mut cfg = StreamConfig::new(12, 12, 0, 0.5, Norm::TWO, 0);
        cfg.target_dim = Some(4);
        let p = gaussian_points(12, 12, 0, 0);
        let mut st = StreamState::new(&cfg).unwrap();
        st.ingest_all(p.iter().take(6)).unwrap();
        let half = st.space_report().buffer_coords;
        st.ingest_all(p.iter().skip(6)).unwrap();
        let l = st.space_report();
        assert_eq!(l.buffer_coords, 2 * half);
        assert_eq!(l.total, 2 * 12 * 4);
    }

    #[test]
    fn dimension_mismatch_and_empty_query() {
        let cfg = StreamConfig::new(3, 5, 0, 0.5, Norm::TWO, 0);
        let mut st = StreamState::new(&cfg).unwrap();
        assert!(st.query(spec(1, 0, Norm::TWO), Solver::Auto, 0).is_err());
        assert!(st.ingest(&[1.0, 2.0]).is_err());
        assert_eq!(st.seen(), 0);
    }

    #[test]
    fn checkpoint_resume() {
        let dir = tempfile::tempdir().unwrap();
        let base = dir.path().join("run");
        let p = gaussian_points(30, 10, 5, 0);
        let mut cfg = StreamConfig::new(10, 30, 0, 0.5, Norm::TWO, 6);
        cfg.target_dim = Some(4);
        let mut whole = StreamState::new(&cfg).unwrap();
        whole.ingest_all(p.iter()).unwrap();

        let mut first = StreamState::new(&cfg).unwrap();
        first.ingest_all(p.iter().take(13)).unwrap();
        first.save_checkpoint(&base).unwrap();
        let mut resumed = StreamState::load_checkpoint(&base).unwrap();
        resumed.ingest_all(p.iter().skip(13)).unwrap();
        assert_eq!(resumed.buffer(), whole.buffer());
        assert_eq!(resumed.space_report(), whole.space_report());

        std::fs::write(dir.path().join("run.buf"), b"garbage").unwrap();
        assert!(StreamState::load_checkpoint(&base).is_err());
    }
}
