//! Exact symbolic toolkit for the graph polynomials of multi-loop diagrams.
//!
//! Two independent construction routes are provided and cross-checked
//! throughout: spanning-forest enumeration ([`forest`]) and Laplacian minor
//! determinants ([`laplacian`]). On top of them sit the determinant and
//! graph-polynomial factorisation identities ([`dodgson`]) and cycle-matroid
//! equivalence experiments ([`matroid`]).
//!
//! The polynomial core is generic over its integer scalar; the crate-root
//! aliases pin the canonical arbitrary-precision instantiation.

pub mod atom;
pub mod coeff;
pub mod dodgson;
pub mod forest;
pub mod graph;
pub mod graphfile;
pub mod laplacian;
pub mod matroid;
pub mod poly;
pub mod random;

pub use atom::{Atom, Monomial};
pub use coeff::Coeff;
pub use graph::{Edge, EdgeVar, FeynGraph, GraphError, Leg, WhitneyMove};
pub use poly::{find_variable_isomorphism, MultiPoly, PolyError};

/// Canonical polynomial type: exact arbitrary-precision integer coefficients.
pub type Poly = MultiPoly<num_bigint::BigInt>;

/// Machine-integer polynomial for small desk experiments. Identities proved
/// here are only as trustworthy as 64-bit arithmetic; prefer [`Poly`].
pub type PolyI64 = MultiPoly<i64>;
