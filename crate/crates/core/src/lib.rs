//! Tabulation of spherical knotoids.
//!
//! Diagrams are rotation systems ([`diagram`]); [`invariants`] computes the
//! bracket, arrow, affine index, mock Alexander and Yamada-of-closure
//! polynomials; [`moves`] explores Reidemeister and flype move space;
//! [`enumerate`] generates candidate diagrams and [`pipeline`] runs the
//! census from generation to the summary tables.

pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod invariants;
pub mod moves;
pub mod pipeline;
pub mod poly;
pub mod structure;

pub use diagram::{canonical_code, parse_code, parse_em, parse_pd, print_em, print_pd, Code, Diagram};
pub use error::*;
pub use poly::{parse_poly, print_poly, MultiPoly, Var};
