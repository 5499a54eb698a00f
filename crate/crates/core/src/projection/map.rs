use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_dim, invalid, Error, Result};
use crate::geometry::{PointSet, QFlat};
use crate::linalg::{self, complete_with_axes, orthonormalize};
use crate::rng::{self, Purpose};

pub const FILE_MAGIC: &[u8; 8] = b"FLATPROJ";
pub const FILE_VERSION: u32 = 1;

/// A scaled orthogonal projection `p -> sqrt(d/m) R p` from d to m dimensions.
///
/// `R` has orthonormal rows spanning a uniformly random m-dimensional
/// subspace. The stored matrix already includes the `sqrt(d/m)` factor.
/// When `m == d` the map is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMap {
    d: usize,
    m: usize,
    seed: u64,
    matrix: Vec<f64>,
    identity: bool,
}

impl ProjectionMap {
    /// Draws the map for `seed`: an m x d standard normal matrix whose rows are
    /// orthonormalized, then scaled.
    pub fn new(d: usize, m: usize, seed: u64) -> Result<Self> {
        if m == 0 || d == 0 {
            return Err(invalid("projection dimensions must be positive"));
        }
        if m > d {
            return Err(invalid(format!("target dimension {m} exceeds source dimension {d}")));
        }
        if m == d {
            let mut matrix = vec![0.0; d * d];
            for i in 0..d {
                matrix[i * d + i] = 1.0;
            }
            return Ok(Self { d, m, seed, matrix, identity: true });
        }
        let mut rng = rng::stream(seed, Purpose::ProjectionMatrix, 0);
        let rows: Vec<Vec<f64>> =
            (0..m).map(|_| (0..d).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
        let rows = complete_with_axes(orthonormalize(&rows), d, m);
        let s = (d as f64 / m as f64).sqrt();
        let matrix = rows.into_iter().flatten().map(|x| x * s).collect();
        Ok(Self { d, m, seed, matrix, identity: false })
    }

    pub fn source_dim(&self) -> usize {
        self.d
    }

    pub fn target_dim(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `sqrt(d/m)`.
    pub fn scale(&self) -> f64 {
        (self.d as f64 / self.m as f64).sqrt()
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// Row-major m x d matrix, scale included.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.matrix[i * self.d..(i + 1) * self.d]
    }

    pub fn apply_into(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        check_dim(self.d, p.len())?;
        check_dim(self.m, out.len())?;
        if self.identity {
            out.copy_from_slice(p);
        } else {
            for (i, o) in out.iter_mut().enumerate() {
                *o = linalg::dot(self.row(i), p);
            }
        }
        Ok(())
    }

    pub fn apply(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.m];
        self.apply_into(p, &mut out)?;
        Ok(out)
    }

    /// The orthogonal projection without the `sqrt(d/m)` factor.
    pub fn apply_unscaled(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.apply(p)?;
        linalg::scale(&mut out, 1.0 / self.scale());
        Ok(out)
    }

    /// Minimum-norm pre-image: `R^T y / sqrt(d/m)`, so `apply(lift(y)) = y`.
    pub fn lift(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.m, y.len())?;
        if self.identity {
            return Ok(y.to_vec());
        }
        let s = self.scale();
        let mut x = vec![0.0; self.d];
        for (i, yi) in y.iter().enumerate() {
            linalg::axpy(yi / (s * s), self.row(i), &mut x);
        }
        Ok(x)
    }

    pub fn project(&self, points: &PointSet) -> Result<PointSet> {
        check_dim(self.d, points.dim())?;
        let mut coords = vec![0.0; points.len() * self.m];
        for (p, out) in points.iter().zip(coords.chunks_exact_mut(self.m)) {
            self.apply_into(p, out)?;
        }
        PointSet::new(self.m, coords)
    }

    /// Image of a flat: anchor and basis pushed through, basis re-orthonormalized.
    pub fn project_flat(&self, flat: &QFlat) -> Result<QFlat> {
        let anchor = self.apply(flat.anchor())?;
        let dirs = flat.basis().iter().map(|b| self.apply(b)).collect::<Result<Vec<_>>>()?;
        QFlat::from_directions(anchor, &dirs)
    }

    /// Pre-image flat through [`lift`](Self::lift); its image is `flat` again.
    pub fn lift_flat(&self, flat: &QFlat) -> Result<QFlat> {
        let anchor = self.lift(flat.anchor())?;
        let dirs = flat.basis().iter().map(|b| self.lift(b)).collect::<Result<Vec<_>>>()?;
        QFlat::from_directions(anchor, &dirs)
    }

    /// Largest deviation of `(R R^T)` from the identity, `R` the unscaled rows.
    pub fn orthonormality_error(&self) -> f64 {
        let s2 = self.scale() * self.scale();
        let mut worst: f64 = 0.0;
        for i in 0..self.m {
            for j in 0..=i {
                let g = linalg::dot(self.row(i), self.row(j)) / s2;
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - expect).abs());
            }
        }
        worst
    }

    /// Binary layout, all little endian: 8-byte magic `FLATPROJ`, u32
    /// version, u64 d, u64 m, u64 seed, then m*d f64 in row-major order.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(FILE_MAGIC)?;
        w.write_all(&FILE_VERSION.to_le_bytes())?;
        w.write_all(&(self.d as u64).to_le_bytes())?;
        w.write_all(&(self.m as u64).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        for x in &self.matrix {
            w.write_all(&x.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != FILE_MAGIC {
            return Err(Error::Format("not a projection matrix file".into()));
        }
        let version = u32::from_le_bytes(read_array(&mut r)?);
        if version != FILE_VERSION {
            return Err(Error::Format(format!("unsupported projection file version {version}")));
        }
        let d = u64::from_le_bytes(read_array(&mut r)?) as usize;
        let m = u64::from_le_bytes(read_array(&mut r)?) as usize;
        let seed = u64::from_le_bytes(read_array(&mut r)?);
        if m == 0 || d == 0 || m > d {
            return Err(Error::Format(format!("bad dimensions d={d} m={m}")));
        }
        let mut matrix = Vec::with_capacity(m * d);
        for _ in 0..m * d {
            let x = f64::from_le_bytes(read_array(&mut r)?);
            if !x.is_finite() {
                return Err(Error::Format("non-finite matrix entry".into()));
            }
            matrix.push(x);
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::Format("trailing bytes after matrix".into()));
        }
        let identity = m == d
            && matrix.iter().enumerate().all(|(k, &x)| x == if k / d == k % d { 1.0 } else { 0.0 });
        let map = Self { d, m, seed, matrix, identity };
        if map.orthonormality_error() > 1e-9 {
            return Err(Error::Format("matrix rows are not orthonormal".into()));
        }
        Ok(map)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

fn read_array<R: Read, const N: usize>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("truncated projection file".into()),
        _ => Error::Io(e),
    })?;
    Ok(buf)
}

/// Alias for [`ProjectionMap::new`].
pub fn make_projection(d: usize, m: usize, seed: u64) -> Result<ProjectionMap> {
    ProjectionMap::new(d, m, seed)
}

pub fn project(points: &PointSet, map: &ProjectionMap) -> Result<PointSet> {
    map.project(points)
}
