//! Decay-rate measurement, ray sampling and convergence estimates.

mod convergence;
mod fit;
mod ray;
mod series;

pub use convergence::{convergence_order, order_from_errors, ConvergenceOrder};
pub use fit::{envelope, fit_power_law, DecayFit, MAX_BINS, MIN_ENVELOPE_POINTS};
pub use ray::{Component, RayKind, RaySeries, RaySpec};
pub use series::*;
