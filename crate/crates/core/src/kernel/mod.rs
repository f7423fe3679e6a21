//! Linear algebra, linear programming and seeded randomness.

pub mod linalg;
pub mod lp;
pub mod rng;

pub use linalg::{determinant, operator_norm, orthogonal_complement, orthonormalize, svd, Svd};
pub use lp::{lp_solve, lp_solve_with, Direction, LpOptions, LpProblem, LpSolution, LpStatus, Sense};
pub use rng::{random_orthogonal, random_unit_vector, RngStream};
