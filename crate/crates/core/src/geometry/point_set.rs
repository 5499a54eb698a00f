use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// An ordered, non-empty list of points sharing one dimension.
///
/// Point ids are the positions `0..n`. Coordinates are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("point dimension must be at least 1"));
        }
        if coords.is_empty() {
            return Err(Error::Empty);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(invalid(format!(
                "{} coordinates do not split into rows of {dim}",
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().position(|x| !x.is_finite()) {
            return Err(invalid(format!("non-finite coordinate in point {}", bad / dim)));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty)?.as_ref().len();
        let mut coords = Vec::with_capacity(first * rows.len());
        for row in rows {
            let row = row.as_ref();
            if row.len() != first {
                return Err(Error::DimensionMismatch { expected: first, found: row.len() });
            }
            coords.extend_from_slice(row);
        }
        Self::new(first, coords)
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false: a `PointSet` holds at least one point.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn rows(&self) -> Vec<&[f64]> {
        self.iter().collect()
    }

    /// The points at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.len() {
                return Err(invalid(format!("index {i} out of range for {} points", self.len())));
            }
            coords.extend_from_slice(self.point(i));
        }
        Self::new(self.dim, coords)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dim: self.dim, coords: self.coords.iter().map(|x| x * s).collect() }
    }

    pub fn translated(&self, t: &[f64]) -> Result<Self> {
        crate::error::check_dim(self.dim, t.len())?;
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(t).map(|(x, y)| x + y))
            .collect();
        Ok(Self { dim: self.dim, coords })
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for p in self.iter() {
            for (ci, x) in c.iter_mut().zip(p) {
                *ci += x;
            }
        }
        let n = self.len() as f64;
        for ci in &mut c {
            *ci /= n;
        }
        c
    }
}

/// The norm parameter: a positive integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    Finite(u32),
    Infinity,
}

impl Norm {
    pub const ONE: Norm = Norm::Finite(1);
    pub const TWO: Norm = Norm::Finite(2);

    pub fn finite(rho: u32) -> Result<Self> {
        if rho == 0 {
            Err(invalid("rho must be at least 1"))
        } else {
            Ok(Norm::Finite(rho))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Norm::Infinity)
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Finite(r) => write!(f, "{r}"),
            Norm::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Norm::Infinity);
        }
        let rho: u32 = s
            .parse()
            .map_err(|_| invalid(format!("rho must be a positive integer or \"inf\", got {s:?}")))?;
        Norm::finite(rho)
    }
}

impl Serialize for Norm {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Norm::Finite(r) => ser.serialize_u32(*r),
            Norm::Infinity => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Norm {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        let s = match &v {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            _ => return Err(serde::de::Error::custom("expected integer or \"inf\"")),
        };
        s.parse().map_err(serde::de::Error::custom)
    }
}
