use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::Norm;

pub const DEFAULT_LAMBDA: f64 = 1.0;
pub const DEFAULT_CORESET_CONSTANT: f64 = 1.0;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("epsilon must lie in (0, 1), got {epsilon}")))
    }
}

/// `ceil(36 ln(n) / ε²)`: enough dimensions to keep all pairwise squared
/// distances of n points within `1 ± ε`.
pub fn jl_dimension(n: usize, epsilon: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    if n < 2 {
        return Err(invalid("need at least two points for a pairwise distance bound"));
    }
    Ok((36.0 * (n as f64).ln() / (epsilon * epsilon)).ceil() as usize)
}

/// `ceil(λ c ln(n) / ε²)`: embeds the span of every c-subset of n points.
pub fn subspace_dimension(n: usize, c: usize, epsilon: f64, lambda: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda must be positive"));
    }
    let m = (lambda * c as f64 * (n.max(2) as f64).ln() / (epsilon * epsilon)).ceil() as usize;
    Ok(m.max(1))
}

/// Dimension that keeps distances from every point to every q-flat inside
/// the span of any c-subset: the subspace bound with `c + 1` points.
pub fn flat_distance_dimension(n: usize, c: usize, epsilon: f64, lambda: f64) -> Result<usize> {
    subspace_dimension(n, c + 1, epsilon, lambda)
}

/// Inputs to the projective-clustering target dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionBudget {
    pub n: usize,
    pub q: usize,
    pub epsilon: f64,
    pub rho: Norm,
    pub lambda: f64,
    pub coreset_constant: f64,
}

impl DimensionBudget {
    pub fn new(n: usize, q: usize, epsilon: f64, rho: Norm) -> Result<Self> {
        let b = Self { n, q, epsilon, rho, lambda: DEFAULT_LAMBDA, coreset_constant: DEFAULT_CORESET_CONSTANT };
        b.validate()?;
        Ok(b)
    }

    pub fn with_constants(mut self, lambda: f64, coreset_constant: f64) -> Result<Self> {
        self.lambda = lambda;
        self.coreset_constant = coreset_constant;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        if self.n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(invalid("lambda must be positive"));
        }
        if !(self.coreset_constant > 0.0 && self.coreset_constant.is_finite()) {
            return Err(invalid("coreset constant must be positive"));
        }
        Ok(())
    }

    /// Coreset size bound at accuracy ε/2:
    /// `C = κ (q+1)² (2/ε) ln(2(q+1)/ε + e)`.
    pub fn coreset_size(&self) -> f64 {
        let q1 = (self.q + 1) as f64;
        let e2 = 2.0 / self.epsilon;
        self.coreset_constant * q1 * q1 * e2 * (q1 * e2 + std::f64::consts::E).ln()
    }

    /// `ceil(λ C ln(n) / ε²)`, at least 1. Not clamped to the source dimension.
    pub fn dimension(&self) -> usize {
        let raw = self.lambda * self.coreset_size() * (self.n as f64).ln() / (self.epsilon * self.epsilon);
        (raw.ceil() as usize).max(1)
    }

    /// [`dimension`](Self::dimension) clamped to `d`.
    pub fn clamped(&self, d: usize) -> usize {
        self.dimension().min(d)
    }
}

pub fn projective_dimension(budget: &DimensionBudget) -> usize {
    budget.dimension()
}
