//! Exact verification of sums-of-tails q-series identities.
//!
//! The crate is layered bottom-up:
//!
//! * [`series`]: truncated Laurent series in `q` over capped parameter
//!   polynomials with exact rational coefficients.
//! * [`qfunc`]: Pochhammer symbols, Gaussian binomials, Lambert sums, the
//!   sigma family and the sums-of-tails combinator.
//! * [`partition`]: brute-force constrained partition enumeration used as an
//!   independent oracle.
//! * [`registry`]: the catalogue of identities and the verifier.

pub mod error;
pub mod fault;
pub mod partition;
pub mod qfunc;
pub mod rational;
pub mod registry;
pub mod series;

pub use error::{Error, Result};
pub use rational::Rat;
