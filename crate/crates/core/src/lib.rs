//! Exact Hodge integrals over the moduli spaces `M̄_{g,n}` of stable curves.
//!
//! The crate reduces integrals of ψ and λ classes to pure ψ intersection
//! numbers through the Grothendieck-Riemann-Roch expression for the Chern
//! character of the Hodge bundle, and provides the Bernoulli-number closed
//! forms and localization relations these integrals satisfy.

pub mod arith;
pub mod cache;
pub mod closed;
pub mod error;
pub mod hodge;
pub mod intersect;
pub mod localize;
pub mod series;

pub use arith::Rat;
pub use error::{Error, Result};
