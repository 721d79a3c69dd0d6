//! Exact solutions, symmetry algebra and conservation laws of the
//! isothermal no-slip drift flux model.

pub mod exact_solutions;
pub mod lie_algebra;
pub mod model;
pub mod numeric_solver;
pub mod report;
pub mod scenario;
pub mod study;
pub mod suites;
pub mod telegraph;
pub mod verification;
