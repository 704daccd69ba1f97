//! Exact computation of mu-stabilizers of curve types on linear algebraic
//! groups over truncated Puiseux series fields.

pub mod algebra;
pub mod curves;
pub mod error;
pub mod groups;
pub mod series;
pub mod stabilizer;

pub use error::{Error, ErrorClass, Result};
