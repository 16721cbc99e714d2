//! Exact-arithmetic computations for rank-metric codes over discretely
//! valued fields and their residue-ring filtrations.
//!
//! The crate has three layers:
//!
//! * scalar foundations: exact p-adic rationals and t-adic rational
//!   functions ([`scalar`]), finite chain rings Z/p^k and Galois rings
//!   GR(p^k, n) with their Frobenius, Teichmüller and trace structure
//!   ([`chain`]), and normal-form linear algebra over local rings
//!   ([`linalg`], [`residue`]);
//! * the skew group algebra S\[G\] of sigma-polynomials and the rank-metric
//!   codes living inside it — Gabidulin and twisted Gabidulin families with
//!   their depth filtrations ([`skew`], [`codes`]);
//! * lattice-class combinatorics: the Bruhat-Tits building with convex
//!   hulls ([`building`]) and the combinatorial classification of Mustafin
//!   special fibers ([`mustafin`]).
//!
//! Everything is `no_std` + `alloc`; IO, JSON formats and the command-line
//! front end live in the companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod building;
pub mod chain;
pub mod codes;
pub mod linalg;
pub mod matrix;
pub mod mustafin;
pub mod qpoly;
pub mod residue;
pub mod scalar;
pub mod skew;
pub mod valuation;
pub mod zk;

pub use chain::{GaloisRing, GrElem};
// re-exported so downstream crates share the exact-arithmetic types
pub use matrix::Matrix;
pub use num_bigint;
pub use num_rational;
pub use scalar::{Backend, Residue, Scalar};
pub use skew::SigmaPoly;
pub use valuation::Valuation;
