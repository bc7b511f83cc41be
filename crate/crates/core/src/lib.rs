//! Time-domain evolution of the Maxwell field on the Schwarzschild exterior.
//!
//! The field is reduced to independent 1+1 problems per spherical-harmonic mode, evolved
//! either as a scalar wave equation or as a first-order transport system, and checked
//! against energy identities, multiplier estimates and decay-rate bounds.

pub mod analysis;
pub mod background;
pub mod energetics;
pub mod error;
pub mod fields;
pub mod harness;
pub mod solver;

pub mod spectral;

pub use error::{Error, Result};
