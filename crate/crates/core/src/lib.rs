//! Exact verification toolkit for the uniruledness argument on the genus-9
//! Prym moduli space.
//!
//! - [`divisor`]: divisor and curve classes, canonical class, intersection pairing
//! - [`taut`]: degree-2 tautological ring and the Grothendieck–Riemann–Roch template
//! - [`lattice`]: Nikulin lattice, Mukai pairing and slopes
//! - [`pencil`]: test curves and plane-geometry counts
//! - [`lp`]: exact rational simplex with certificates
//! - [`cone`]: the pseudo-effectivity certificate
//! - [`report`]: orchestration of every check into one report

pub mod cone;
pub mod divisor;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod pencil;
pub mod rational;
pub mod report;
pub mod taut;

pub use error::{Error, Result};
pub use rational::Q;
