//! Matrix group schemes, their points over the series field, the residue
//! retraction and the infinitesimal subgroup.

pub mod element;
pub mod iwasawa;
pub mod scheme;

pub use element::{GroupElement, GroupOp, KPoint};
pub use iwasawa::{is_upper_triangular, iwasawa};
pub use scheme::{adjugate_of, det_of, GroupScheme};
