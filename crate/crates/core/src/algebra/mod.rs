//! Exact fields, polynomials, ideals and Groebner bases.

pub mod field;
pub(crate) mod fpoly;
pub mod groebner;
pub mod ideal;
pub mod linalg;
pub mod poly;
pub mod univariate;

pub use field::{scalar_arith, ExtField, FieldSpec, Scalar, ScalarOp};
pub use groebner::DEFAULT_SPAIR_BUDGET;
pub use ideal::{eliminate, groebner_basis, ideal_member, krull_dim, GroebnerBasis, Ideal, Membership};
pub use poly::{Monomial, MonomialOrder, Poly, Ring};
pub use univariate::{uni_factor, FactorStatus, Factorization, UniPoly};
