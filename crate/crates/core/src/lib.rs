//! Exact calculus for Dehn surgery on knots described as splice expressions.
//!
//! - [`slope`]: slopes on a torus, distance, Dehn twists, the integer gap.
//! - [`knot`]: the knot-expression language (parser, printer, validator).
//! - [`seifert`]: Seifert fibered pieces, filling, normalization, `H₁`.
//! - [`jsj`]: JSJ decompositions, surgery classification, cable reduction and
//!   characterising-slope certificates.
//! - [`geometry`]: cusp-length and filled-volume bounds.

pub mod geometry;
pub mod jsj;
pub mod knot;
pub mod seifert;
pub mod serde_int;
pub mod slope;

pub use knot::{parse, CuspShape, KnotExpr};
pub use slope::Slope;
