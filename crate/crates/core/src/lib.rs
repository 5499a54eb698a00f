//! Dimension reduction for projective clustering.
//!
//! Points are pushed through a seeded random orthogonal projection whose
//! target dimension comes from coreset size bounds, so that the cost of the
//! best `k` q-flats under any L_rho norm survives up to a `(1 ± ε)` factor.
//! Around that core the crate provides:
//!
//! * [`geometry`]: point sets, flats, distances, minimum enclosing balls and
//!   best-fit flats;
//! * [`projection`]: target dimensions, projection maps, and empirical
//!   distortion checks;
//! * [`coresets`]: optimal-center oracles and three coreset constructions,
//!   plus the simplex lower-bound instance;
//! * [`clustering`]: exact brute-force solvers for tiny inputs and
//!   heuristics for the rest;
//! * [`pipeline`]: project-solve-lift clustering and a one-pass streaming
//!   engine with a space ledger;
//! * [`cech`]: Čech filtrations from enclosing-ball radii and the sandwich
//!   check under projection;
//! * [`cli`]: the command-line front end used by the `flatsketch` binary.

pub mod cech;
pub mod cli;
pub mod clustering;
pub mod coresets;
mod error;
pub mod geometry;
pub mod io;
mod linalg;
pub mod pipeline;
pub mod projection;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::{Norm, PointSet, QFlat};
