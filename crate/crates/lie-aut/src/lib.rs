//! Exact-rational toolkit for six-dimensional solvable Lie algebras.
//!
//! The crate encodes algebras by their structure constants, solves for
//! ad-invariant symmetric bilinear forms and derivation algebras with exact
//! linear algebra over ℚ, and verifies tabulated automorphism families and
//! invariant metrics at exact rational parameter instances. A
//! machine-readable catalog of 161 algebras (with parameter variants) ships
//! inside the crate.

#![warn(missing_docs)]

pub mod aut;
pub mod catalog;
pub mod expr;
pub mod lie;
pub mod matrix;
pub mod rat;
pub mod solvers;
