//! Schwarzschild exterior geometry in the tortoise coordinate.
//!
//! All lengths are in units of the mass parameter unless stated otherwise.
//! Near the horizon the areal radius alone cannot resolve `r - 2M` in double
//! precision, so [`Radius`] carries the gap to the horizon separately.

mod coords;
mod grid;
mod trapping;

pub use coords::{kruskal_coords, null_coords, KruskalCoords, NullCoords, KRUSKAL_EXPONENT_LIMIT};
pub use grid::RadialGrid;
pub use trapping::{chi_trap, TrappingProfile, CHI_TRAP_HEIGHT, CHI_TRAP_RAMP};

use crate::error::BackgroundError;
use std::f64::consts::LN_2;

const MAX_NEWTON_ITERATIONS: usize = 200;

/// Areal radius together with its distance to the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radius {
    pub areal: f64,
    /// `r - 2M`, kept separately so it stays accurate deep in the throat.
    pub horizon_gap: f64,
}

impl Radius {
    /// Lapse factor `1 - 2M/r`.
    pub fn lapse(&self) -> f64 {
        self.horizon_gap / self.areal
    }
}

/// Background parameters: the black-hole mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Background {
    mass: f64,
}

impl Default for Background {
    fn default() -> Self {
        Background { mass: 1.0 }
    }
}

impl Background {
    pub fn new(mass: f64) -> Result<Self, BackgroundError> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(BackgroundError::InvalidMass(mass));
        }
        Ok(Background { mass })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn horizon(&self) -> f64 {
        2.0 * self.mass
    }

    /// `rs = r + 2M ln((r-2M)/2M) - 3M + 2M ln 2`, normalized so that `r = 3M` maps to 0.
    pub fn tortoise_from_r(&self, r: f64) -> Result<f64, BackgroundError> {
        let two_m = self.horizon();
        if !(r > two_m) || !r.is_finite() {
            return Err(BackgroundError::InsideHorizon { r, horizon: two_m });
        }
        Ok(self.tortoise(Radius {
            areal: r,
            horizon_gap: r - two_m,
        }))
    }

    /// Forward map using the split radius; exact for any positive gap.
    pub fn tortoise(&self, radius: Radius) -> f64 {
        let m = self.mass;
        radius.areal + 2.0 * m * (radius.horizon_gap / (2.0 * m)).ln() - 3.0 * m + 2.0 * m * LN_2
    }

    /// Inverts the tortoise map.
    ///
    /// Writing `r - 2M = 2M e^y` turns the relation into `e^y + y = c` with
    /// `c = (rs + M - 2M ln 2) / 2M`, which is solved by Newton's method
    /// safeguarded with a bisection bracket.
    pub fn radius(&self, rs: f64) -> Result<Radius, BackgroundError> {
        let m = self.mass;
        let c = (rs + m - 2.0 * m * LN_2) / (2.0 * m);
        if !c.is_finite() {
            return Err(BackgroundError::NoConvergence { rs, iterations: 0 });
        }
        // g(y) = e^y + y - c is increasing; g(hi) = e^c > 0 and g(lo) <= 0.
        let (mut lo, mut hi) = if c <= 1.0 { (c - 1.0, c) } else { (0.0, c) };
        let mut y = if c > 1.0 { c.ln() } else { c - c.exp() };
        y = y.clamp(lo, hi);
        for _ in 0..MAX_NEWTON_ITERATIONS {
            let ey = y.exp();
            let g = ey + y - c;
            if g > 0.0 {
                hi = y;
            } else {
                lo = y;
            }
            let mut next = y - g / (ey + 1.0);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let step = (next - y).abs();
            y = next;
            if step <= 4.0 * f64::EPSILON * y.abs().max(1.0) || hi - lo <= f64::EPSILON * y.abs().max(1.0) {
                let mut gap = 2.0 * m * y.exp();
                if c > 0.0 {
                    // Far out the log variable loses digits of r; polish in the gap itself.
                    for _ in 0..3 {
                        let f = gap + 2.0 * m * (gap / (2.0 * m)).ln() - m + 2.0 * m * LN_2 - rs;
                        gap -= f / (1.0 + 2.0 * m / gap);
                    }
                }
                return Ok(Radius {
                    areal: 2.0 * m + gap,
                    horizon_gap: gap,
                });
            }
        }
        Err(BackgroundError::NoConvergence {
            rs,
            iterations: MAX_NEWTON_ITERATIONS,
        })
    }

    pub fn r_from_tortoise(&self, rs: f64) -> Result<f64, BackgroundError> {
        self.radius(rs).map(|r| r.areal)
    }

    /// `1 - 2M/r` at tortoise coordinate `rs`.
    pub fn lapse(&self, rs: f64) -> Result<f64, BackgroundError> {
        self.radius(rs).map(|r| r.lapse())
    }

    /// Potential weight `W = (1 - 2M/r) / r^2`; the degree-l potential is `l(l+1) W`.
    pub fn potential_weight(&self, radius: Radius) -> f64 {
        radius.lapse() / (radius.areal * radius.areal)
    }

    /// `V_l = l(l+1)(1 - 2M/r)/r^2`.
    pub fn wave_potential(&self, l: u32, rs: f64) -> Result<f64, BackgroundError> {
        let ll = f64::from(l) * f64::from(l + 1);
        if ll == 0.0 {
            return Ok(0.0);
        }
        self.radius(rs).map(|r| ll * self.potential_weight(r))
    }

    /// `1 - (rs/r)(1 - 3M/r)`; equals 1 at the photon sphere and is negative far away.
    pub fn trapping_term(&self, rs: f64) -> Result<f64, BackgroundError> {
        self.radius(rs).map(|r| self.trapping_at(rs, r))
    }

    pub(crate) fn trapping_at(&self, rs: f64, radius: Radius) -> f64 {
        1.0 - (rs / radius.areal) * (1.0 - 3.0 * self.mass / radius.areal)
    }

    /// `dW/drs = -2 W (1 - 3M/r) / r`.
    pub(crate) fn potential_weight_derivative(&self, radius: Radius) -> f64 {
        -2.0 * self.potential_weight(radius) * (1.0 - 3.0 * self.mass / radius.areal) / radius.areal
    }
}
