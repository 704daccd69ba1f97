//! Curve branches at infinity: validation, places of plane curves,
//! implicitization and type dimension.

pub mod branch;
pub mod newton;

pub use branch::{implicitize, is_centered_at_infinity, type_dimension, validate_branch, Branch, TypeDimension};
pub use newton::{places_at_infinity, PlaneCurveInput, Places};
