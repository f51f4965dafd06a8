//! Representations of acyclic quivers over prime fields.

mod count;
mod module;
pub(crate) mod quiver;

pub use count::{count_subreps, plan_count, CountOptions, CountPlan, ExecMode, DEFAULT_CEILING, MAX_COUNT_PRIME};
pub use module::{
    derive_seed, direct_sum, ext_dim, hom_dim, random_rep, random_rigid_rep, QuiverRep, DEFAULT_MAX_TRIALS,
};
pub use quiver::Quiver;
