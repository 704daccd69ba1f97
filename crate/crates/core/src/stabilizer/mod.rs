//! Infinitesimal stabilizers of curve types: tube equivalence, reduction,
//! and the two independent stabilizer algorithms.

mod ansatz;
pub mod components;
pub mod degeneration;
pub mod pipeline;
pub mod reduce;
pub mod reparam;
pub mod solve;
pub mod subgroup;
pub mod tube;

pub use components::{identity_component, is_certified_prime, Decomposition};
pub use degeneration::{closure_ideal, flat_model, hensel_lift, stab_degeneration, Degeneration, FlatModel};
pub use pipeline::{
    compute_stabilizer, random_group_point, theorem_checks, translate_branch, Agreement, Algorithm, Check, StabilizerRun, TheoremChecks,
};
pub use reduce::{mu_reduce, Reduction};
pub use reparam::stab_reparam;
pub use solve::{find_point, Choice};
pub use subgroup::{
    conjugate_stab, is_solvable, mark_verified, verify_subgroup, Classification, Family, Solvability, SubgroupDesc, SubgroupFlags,
    SubgroupReport,
};
pub use tube::{check_certificate, mu_correct, MuCorrection, TubeCertificate, TubeFailure};

/// Work limits shared by the stabilizer algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Truncation order for series produced internally.
    pub precision: i64,
    /// Largest generator degree used by degeneration and implicitization.
    pub degree_bound: u32,
    /// Largest number of correction unknowns in a reparameterization.
    pub order_budget: usize,
    /// Sample pairs tried by the solvability test.
    pub sample_budget: usize,
    pub seed: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { precision: 12, degree_bound: 8, order_budget: 16, sample_budget: 8, seed: 0x5eed }
    }
}
