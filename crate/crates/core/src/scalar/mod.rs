//! Exact rational-function scalars and linear algebra over them.

mod gcd;
pub mod linalg;
mod poly;
mod rational;

pub use gcd::gcd;
pub use linalg::{generic_rank, nullspace, rank_with_pivots, solve_linear, LinearSystem, Matrix, Solution, SolveOutcome};
pub use poly::{default_names, Monomial, Poly};
pub use rational::Scalar;
