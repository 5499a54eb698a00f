//! Čech filtrations from enclosing-ball radii, and the check that a random
//! projection keeps the filtration between two rescaled copies of itself.
//!
//! A simplex `{p_0, …, p_s}` enters the Čech complex at the radius of the
//! minimum enclosing ball of its vertices.

mod complex;
mod sandwich;

pub use complex::{build_cech, build_cech_with_budget, simplex_count, FilteredComplex, Simplex, DEFAULT_BUDGET};
pub use sandwich::{
    filtration_inclusions_hold, sandwich_dimension, verify_sandwich, SandwichReport, Violation, DEFAULT_C_SLACK,
};
