//! Exact computer algebra for invariant bilinear differential operators
//! (super Gordan–Rankin–Cohen brackets) on the (1|1)-dimensional
//! superstring.
//!
//! The crate has two independent routes to every classification result:
//! singular vectors in tensor products of induced modules
//! ([`induced`], [`singular`]) and a brute-force equivariance check of
//! the corresponding operators on polynomial densities ([`brackets`]).

pub mod brackets;
pub mod error;
pub mod gl11;
pub mod induced;
pub mod linalg;
pub mod rat;
pub mod singular;
pub mod supercalc;
pub mod tables;

pub use error::{GrcError, Result};
pub use rat::Rat;
