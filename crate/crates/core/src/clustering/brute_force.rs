use crate::clustering::{ClusteringSolution, ProblemSpec};
use crate::error::{Error, Result};
use crate::geometry::{aggregate, best_fit_flat_l2, meb, Norm, PointSet, QFlat};

pub const BRUTE_FORCE_MAX_POINTS: usize = 12;
pub const BRUTE_FORCE_MAX_K: usize = 3;

pub(crate) fn supports(points: &PointSet, spec: ProblemSpec) -> bool {
    points.len() <= BRUTE_FORCE_MAX_POINTS
        && spec.k <= BRUTE_FORCE_MAX_K
        && spec.q < points.dim()
        && (spec.rho == Norm::TWO || (spec.rho == Norm::Infinity && spec.q == 0))
}

/// Exact optimum by enumerating every partition into at most `k` parts.
///
/// Each part gets its exact optimal flat: the best-fit flat for rho = 2, the
/// enclosing-ball center for rho = ∞ with q = 0. Part costs are tabulated
/// over all subsets first; the enumeration walks restricted-growth strings
/// and prunes a branch once its partial cost reaches the incumbent.
pub fn brute_force_optimal(points: &PointSet, spec: ProblemSpec) -> Result<ClusteringSolution> {
    spec.check(points)?;
    if !supports(points, spec) {
        return Err(Error::Unsupported(format!(
            "brute force handles n <= {BRUTE_FORCE_MAX_POINTS}, k <= {BRUTE_FORCE_MAX_K} and rho = 2, or rho = inf with q = 0 \
             (got n = {}, k = {}, q = {}, rho = {})",
            points.len(),
            spec.k,
            spec.q,
            spec.rho
        )));
    }
    let n = points.len();
    let costs: Vec<(f64, QFlat)> = (0..1usize << n).map(|mask| part_cost(points, mask, spec)).collect::<Result<_>>()?;

    let mut search = Search { n, k: spec.k, rho: spec.rho, costs: &costs, best: f64::INFINITY, best_parts: Vec::new() };
    let mut parts = Vec::with_capacity(spec.k);
    search.descend(0, &mut parts);

    let mut flats: Vec<QFlat> = search.best_parts.iter().map(|&m| costs[m].1.clone()).collect();
    while flats.len() < spec.k {
        flats.push(flats[flats.len() - 1].clone());
    }
    ClusteringSolution::evaluate(points, flats, spec.rho)
}

/// Cost of one part: sum of squared distances for rho = 2, radius for rho = ∞.
fn part_cost(points: &PointSet, mask: usize, spec: ProblemSpec) -> Result<(f64, QFlat)> {
    if mask == 0 {
        return Ok((0.0, QFlat::point(vec![0.0; points.dim()])));
    }
    let idx: Vec<usize> = (0..points.len()).filter(|i| mask >> i & 1 == 1).collect();
    let sub = points.subset(&idx)?;
    if spec.rho == Norm::Infinity {
        let ball = meb(&sub);
        let flat = QFlat::point(ball.center);
        let r = sub.iter().map(|p| flat.distance_unchecked(p)).fold(0.0, f64::max);
        return Ok((r, flat));
    }
    let flat = best_fit_flat_l2(&sub, spec.q)?;
    let sse = sub.iter().map(|p| flat.distance_unchecked(p).powi(2)).sum();
    Ok((sse, flat))
}

struct Search<'a> {
    n: usize,
    k: usize,
    rho: Norm,
    costs: &'a [(f64, QFlat)],
    best: f64,
    best_parts: Vec<usize>,
}

impl Search<'_> {
    fn total(&self, parts: &[usize]) -> f64 {
        let c: Vec<f64> = parts.iter().map(|&m| self.costs[m].0).collect();
        match self.rho {
            Norm::Infinity => aggregate(&c, Norm::Infinity),
            _ => c.iter().sum(),
        }
    }

    /// Assigns point `i` to an existing part or opens a new one.
    fn descend(&mut self, i: usize, parts: &mut Vec<usize>) {
        let partial = self.total(parts);
        if partial >= self.best {
            return;
        }
        if i == self.n {
            self.best = partial;
            self.best_parts = parts.clone();
            return;
        }
        for j in 0..parts.len() {
            parts[j] |= 1 << i;
            self.descend(i + 1, parts);
            parts[j] &= !(1 << i);
        }
        if parts.len() < self.k {
            parts.push(1 << i);
            self.descend(i + 1, parts);
            parts.pop();
        }
    }
}
