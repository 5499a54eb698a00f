//! Single-center coresets: greedy contraction for any ρ, Frank–Wolfe for
//! ρ = 2, farthest-point MEB coresets for ρ = ∞, and the simplex instance
//! that bounds how small such coresets can be.

mod center;
mod frank_wolfe;
mod greedy;
mod meb_coreset;
mod record;
mod simplex;

pub use center::{optimal_center, CenterOracle, DESCENT_MAX_ITERS, DESCENT_TOL, WEISZFELD_MAX_ITERS, WEISZFELD_TOL};
pub use frank_wolfe::{frank_wolfe_coreset, frank_wolfe_steps, g_optimum};
pub use greedy::{greedy_center_coreset, greedy_iteration_cap, DELTA_REL_TOL};
pub use meb_coreset::{meb_coreset, meb_coreset_cap};
pub use record::{Coreset, TraceRow};
pub use simplex::{simplex_lower_bound, SimplexBound, SimplexInstance, SIMPLEX_CHECK_TOL};
