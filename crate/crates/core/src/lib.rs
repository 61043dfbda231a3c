//! Sparse-support approximation of discrete distributions under optimal
//! transport, and the convex clustering methods built on it.
//!
//! Given points `x_1..x_N` with masses `p0`, the cardinality-penalised
//! transport problem
//!
//! ```text
//! min  trace(C^T P) + lambda * card(P^T 1)   s.t.  P 1 = p0,  P >= 0
//! ```
//!
//! picks a few representative points and moves all mass onto them. Three
//! convex relaxations are provided:
//!
//! * [`son`]: sum of column norms (group lasso), solved by ADMM;
//! * [`facility`]: the fractional facility-location LP;
//! * [`linf`]: `lambda / ||P^T 1||_inf`, split into `N` convex problems.
//!
//! [`clustering`] reads clusters off a plan, [`omt`] solves exact transport
//! problems, and [`lp`] is the simplex solver underneath. [`experiment`]
//! runs lambda sweeps; [`io`] handles CSV, JSON and SVG files.

pub mod cardinality;
pub mod clustering;
pub mod datagen;
pub mod domain;
pub mod error;
pub mod experiment;
pub mod facility;
pub mod io;
pub mod linf;
pub mod lp;
pub mod omt;
pub mod son;

pub use domain::{
    build_cost_matrix, CostMatrix, PointCloud, ProbabilityVector, SolveReport, SolveStatus,
    TransportPlan,
};
pub use error::{Error, Result};
