//! Exact-arithmetic machinery for Borel sets, binomial Groebner
//! deformations, and connecting sequences of homogeneous ideals.
//!
//! Everything is computed over the rationals with no rounding. The
//! crate is organized bottom-up:
//!
//! * [`orders`] — exponent vectors, the hlex/rlex term orders, the
//!   Borel order and its matrix witnesses;
//! * [`polyalg`] — polynomials, Buchberger's algorithm, initial ideals,
//!   saturation, weight realizations, and the one-parameter deformation;
//! * [`hilbert`] — Hilbert functions with certified polynomial tails,
//!   and the Gotzmann decomposition;
//! * [`borel`] — Borel sets, growth/height vectors, normal forms, and
//!   lex ideals;
//! * [`binsys`] — binomial systems, their Groebner identities, swap
//!   sequences toward lexicographic sets, and filtration ideals;
//! * [`gin`] — generic initial ideals by randomized coordinate change,
//!   and the generic-coefficient combinatorics;
//! * [`cohomology`] — cohomological Hilbert functions of the supported
//!   quotient families;
//! * [`sequences`] — verified connecting sequences between ideals.

pub mod error;
pub mod orders;
pub mod polyalg;
pub mod hilbert;
pub mod borel;
pub mod binsys;
pub mod gin;
pub mod cohomology;
pub mod sequences;

pub use error::{Error, Result};
