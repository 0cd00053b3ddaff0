//! Graph-valued bracket invariants for virtual, flat and free knots and links.
//!
//! A virtual link is handed to this crate as a Gauss code.  From there the
//! library computes
//!
//! * the generalized Kuperberg sl(3) bracket `[[K]]`, valued in the module of
//!   Laurent-polynomial combinations of reduced trivalent bipartite graphs,
//!   together with its free specializations at `A = ±1` and the minimality /
//!   non-classicality certificates that come with it ([`sl3`]),
//! * the free-knot G2 bracket at `q = 1`, valued in rational combinations of
//!   sign-classed unoriented trivalent graphs ([`g2`]),
//! * the Manturov parity bracket and the mod-2 free bracket ([`parity`]),
//! * the odd writhe and Gaussian parities ([`diagram`]),
//! * the Penrose coloring bracket for trivalent virtual graphs ([`penrose`]),
//! * a trace on virtual braid words through the graph category ([`braid`]).
//!
//! Diagrams, framed graphs and webs are immutable once built; every operation
//! is a pure function, so values can be shared freely across threads.

#![forbid(unsafe_code)]

pub mod braid;
pub mod diagram;
pub mod framed;
pub mod fuzz;
pub mod g2;
pub mod parity;
pub mod penrose;
pub mod poly;
pub mod sl3;
pub mod web;

pub use poly::{GraphPolynomial, LaurentPoly};
pub use web::{CanonicalKey, WebGraph};
