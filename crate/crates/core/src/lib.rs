//! Exact counting and polynomial identities for Vinogradov systems with one
//! slice removed.
//!
//! The crate is `no_std` with `alloc`. The default `std` feature turns on
//! rayon-backed parallel counting and wall-clock timing of count reports.
//!
//! Module map:
//!
//! - [`algebra`]: sparse multivariate polynomials over the integers, exact
//!   division, and certified linear/algebraic dependency search.
//! - [`systems`]: univariate polynomial tuples, the well-conditioned check,
//!   the forms `σ_{j,n}` and the binomial weights of the shifted system.
//! - [`counting`]: meet-in-the-middle lattice point counts plus an
//!   enumeration oracle that shares no code path with them.
//! - [`identities`]: the dependency polynomials `Ψ_n`, their cofactors `Φ_n`,
//!   the block determinants `D_n` and the Vandermonde quotient `Θ`.
//! - [`classification`]: coefficient hierarchies and solution labels.
//! - [`bounds`]: exponent calculators for the mean value estimates.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod algebra;
pub mod bounds;
pub mod classification;
pub mod counting;
mod error;
pub mod identities;
pub mod systems;

pub use error::{Error, Result};

pub use num_bigint::BigInt;
