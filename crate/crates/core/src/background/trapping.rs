use super::RadialGrid;
use crate::error::BackgroundError;

/// Plateau height of the dominating cutoff.
pub const CHI_TRAP_HEIGHT: f64 = 2.0;
/// Width of each ramp, in units of M.
pub const CHI_TRAP_RAMP: f64 = 2.0;

/// Trapping term on a grid together with its dominating smooth cutoff.
#[derive(Debug, Clone)]
pub struct TrappingProfile {
    pub values: Vec<f64>,
    pub rs_left: f64,
    pub rs_right: f64,
    pub chi: Vec<f64>,
    pub mass: f64,
}

fn smoothstep5(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)
}

/// C^2 bump: `CHI_TRAP_HEIGHT` on `[left, right]`, quintic ramps of width `CHI_TRAP_RAMP * M`.
pub fn chi_trap(rs: f64, left: f64, right: f64, mass: f64) -> f64 {
    let ramp = CHI_TRAP_RAMP * mass;
    let rise = smoothstep5((rs - (left - ramp)) / ramp);
    let fall = smoothstep5(((right + ramp) - rs) / ramp);
    CHI_TRAP_HEIGHT * rise.min(fall)
}

impl TrappingProfile {
    pub fn build(grid: &RadialGrid) -> Result<Self, BackgroundError> {
        let bg = grid.background();
        let term = |rs: f64| bg.trapping_term(rs);
        let left = crossing(&term, -1.0)?;
        let right = crossing(&term, 1.0)?;
        if grid.rs_min() > left - CHI_TRAP_RAMP * bg.mass() || grid.rs_max() < right + CHI_TRAP_RAMP * bg.mass() {
            return Err(BackgroundError::TrappingNotCovered {
                rs_min: grid.rs_min(),
                rs_max: grid.rs_max(),
                left,
                right,
            });
        }
        let chi = grid.rs().iter().map(|&x| chi_trap(x, left, right, bg.mass())).collect();
        Ok(TrappingProfile {
            values: grid.trapping().to_vec(),
            rs_left: left,
            rs_right: right,
            chi,
            mass: bg.mass(),
        })
    }

    pub fn chi_at(&self, rs: f64) -> f64 {
        chi_trap(rs, self.rs_left, self.rs_right, self.mass)
    }
}

/// Zero of the trapping term on the side given by `direction`, by bracketing and bisection.
fn crossing<F>(term: &F, direction: f64) -> Result<f64, BackgroundError>
where
    F: Fn(f64) -> Result<f64, BackgroundError>,
{
    let mut inner = 0.0;
    let mut outer = direction;
    while term(outer)? > 0.0 {
        inner = outer;
        outer *= 2.0;
        if outer.abs() > 1e8 {
            return Err(BackgroundError::InvalidGrid("trapping term has no zero crossing".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (inner + outer);
        if term(mid)? > 0.0 {
            inner = mid;
        } else {
            outer = mid;
        }
        if (outer - inner).abs() < 1e-14 * outer.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (inner + outer))
}
