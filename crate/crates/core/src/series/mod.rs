//! Truncated Puiseux and Hahn-type series over an exact field.

pub mod exponent;
#[allow(clippy::module_inception)]
pub mod series;

pub use exponent::Exponent;
pub use series::{subst_normalized, Coeff, PrecisionPolicy, PuiseuxSeries, Series, DEFAULT_PRECISION, HARD_CAP};
