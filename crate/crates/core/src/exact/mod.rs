//! Exact scalar and linear-algebra substrate.

mod fp;
mod interp;
mod intpoly;
mod laurent;
mod matrix;

pub use fp::{
    enumerate_subspaces, first_primes, inv_mod, is_prime, pow_mod, solve_linear_fp, FpMatrix,
    Nullspace, Subspace, SubspaceSpace,
};
pub(crate) use fp::check_prime;
pub use interp::{interpolate_counting_poly, lagrange_rational};
pub(crate) use interp::eval_rational;
pub use intpoly::{gaussian_binomial, gaussian_binomial_at, IntPolyQ};
pub use laurent::LaurentV;
pub use matrix::{invert_integer_matrix, FullRankSolver, IntMatrix, RatMatrix};
