//! Exact-arithmetic construction and block diagonalization of Varchenko
//! matrices for pseudoline arrangements given as wiring diagrams, plus
//! abstract oriented-matroid tope sets.
//!
//! The main pipeline: parse a wiring diagram ([`arrangement`]), enumerate
//! regions and the intersection poset, build the Varchenko matrix
//! ([`varchenko`]), find a good numbering and reduce to block diagonal form
//! ([`reduction`]), and cross-check every identity against brute-force
//! oracles ([`oracle`]).

pub mod arrangement;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod reduction;
pub mod varchenko;

/// Exact integer coefficients used throughout the crate.
pub type Int = num_bigint::BigInt;
/// Exact rationals for evaluation; no floating point anywhere.
pub type Rat = num_rational::BigRational;
/// The concrete polynomial type of every matrix entry.
pub type Poly = poly::Polynomial<Int>;
