//! Conditional zero statistics of Gaussian random polynomials.
//!
//! Hermitian Gaussian ensembles on the projective line and on
//! Bargmann-Fock space, exact conditioning on point values, closed-form
//! kernels, scaling-limit conditional densities, a root finder, and Monte
//! Carlo experiments that check one against the other.

pub mod cli;
pub mod densities;
pub mod ensembles;
pub mod experiments;
pub mod kernels;
pub mod error;
pub mod numerics;
pub mod output;
pub mod selftest;
pub mod test_functions;
pub mod zeros;

pub use error::{Error, Result};
