//! Ice quivers, compatible pairs, seeds and mutation.

mod audit;
mod fpoly;
mod ice;
mod pair;
mod seed;

pub use audit::{audit_seed, Invariant};
pub use fpoly::{extract_g_and_f, rebuild, FPolynomial};
pub use ice::{parse_quiver, IceQuiver, LambdaSpec, QuiverFile};
pub use pair::{
    e_matrix, f_matrix, fomin_zelevinsky_mutation, is_unitally_compatible, lambda_from_extended,
    mutate_matrices, mutate_matrices_signed, CompatiblePair, MatrixMutation,
};
pub use seed::{distinct_variables, mutation_ball, walk, walk_from, BallVariable, QuantumSeed, DEFAULT_TERM_CEILING};
