//! Cohomology dimensions in blocks of a quantum group at a root of unity.
//!
//! This crate computes, exactly and from first principles of alcove
//! combinatorics:
//!
//! * Kazhdan-Lusztig polynomials of affine Weyl groups (with an independent
//!   R-polynomial oracle) and the parabolic combinations
//!   `P^J_{y,w} = Σ_{x∈W_J} (-1)^(l(x)) P_{yx,w}`;
//! * Ext generating functions `Σ_n dim Extⁿ(Δ(y.μ), L(w.μ)) tⁿ` in regular
//!   and singular blocks, Ext between irreducibles, and the series for the
//!   standard-filtration layers of a wall-crossed standard module;
//! * irreducible characters as alternating sums of standard characters, and
//!   decomposition matrices, with a cross-check that the two are mutually
//!   inverse.
//!
//! The crate is organized in the order a computation flows:
//! [`rootsys`] (Cartan data) → [`coxeter`] (the affine Weyl group) →
//! [`klpoly`] (KL polynomials) → [`alcove`] (weights, orbits, blocks) →
//! [`ext`] (the cohomology formulas) → [`cli`] (the `klext` binary).
//!
//! A narrative guide with runnable examples lives in `book/`; its code
//! blocks are compiled as doc-tests through the [`guide`] module.

#![allow(clippy::manual_is_multiple_of)]

pub mod alcove;
pub mod cli;
pub mod coxeter;
pub mod ext;
pub mod guide;
pub mod klpoly;
pub mod rootsys;
