//! Polynomial system solving.
//!
//! Sparse polynomials over exact rationals or complex doubles, root-count
//! bounds from Newton polytopes, Macaulay-matrix normal forms with
//! eigenvalue-based solving, Buchberger's algorithm, and total-degree
//! homotopy continuation.

pub mod linalg;
pub mod fixtures;
pub mod groebner;
pub mod homotopy;
pub mod macaulay;
pub mod poly;
pub mod root_counts;
pub mod scalar;
pub mod solution;

pub use poly::{MonomialOrder, Monomial, OrderKind, PolyError, PolySystem, Polynomial};
pub use scalar::{Complex, Rational, Scalar};
