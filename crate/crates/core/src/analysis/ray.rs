use crate::background::Radius;
use crate::fields::{coordinate_components, small_from_capital, ModalSample};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayKind {
    /// Fixed `rs`; parameter is `t`.
    FixedRs,
    /// Constant `u- = t - rs`; parameter is `u+`.
    Outgoing,
    /// Constant `u+ = t + rs`; parameter is `u-`.
    Ingoing,
    /// The slice at fixed `t`; parameter is `rs`.
    FixedTSlice,
}

/// Quantity extracted along a ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Phi1,
    Phi0,
    PhiM1,
    Cap1,
    Cap0,
    CapM1,
    /// `|(1 - 2M/r)^{-1} Phi_-1|`, regular across the future horizon.
    HorizonM1,
}

impl Component {
    pub const ALL: [Component; 7] = [
        Component::Phi1,
        Component::Phi0,
        Component::PhiM1,
        Component::Cap1,
        Component::Cap0,
        Component::CapM1,
        Component::HorizonM1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::Phi1 => "phi1",
            Component::Phi0 => "phi0",
            Component::PhiM1 => "phim1",
            Component::Cap1 => "cap_phi1",
            Component::Cap0 => "cap_phi0",
            Component::CapM1 => "cap_phim1",
            Component::HorizonM1 => "horizon_phim1",
        }
    }

    /// Magnitude of the component assembled from modal samples at `(theta, phi)`.
    pub fn value(self, samples: &[ModalSample], theta: f64, phi: f64, radius: Radius) -> f64 {
        let cap = coordinate_components(samples, theta, phi);
        match self {
            Component::Cap1 => cap.cap1.norm(),
            Component::Cap0 => cap.cap0.norm(),
            Component::CapM1 => cap.capm1.norm(),
            Component::HorizonM1 => cap.capm1.norm() / radius.lapse(),
            _ => {
                let s = small_from_capital(&cap, radius);
                match self {
                    Component::Phi1 => s.phi1.norm(),
                    Component::Phi0 => s.phi0.norm(),
                    _ => s.phim1.norm(),
                }
            }
        }
    }
}

impl FromStr for Component {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Component::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown component '{s}'"))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySpec {
    pub kind: RayKind,
    pub value: f64,
    pub component: Component,
}

impl RaySpec {
    pub fn new(kind: RayKind, value: f64, component: Component) -> Self {
        RaySpec { kind, value, component }
    }

    /// Position `(parameter, rs)` of the ray at time `t`; `None` for slices.
    pub fn point(&self, t: f64) -> Option<(f64, f64)> {
        match self.kind {
            RayKind::FixedRs => Some((t, self.value)),
            RayKind::Outgoing => {
                let rs = t - self.value;
                Some((t + rs, rs))
            }
            RayKind::Ingoing => {
                let rs = self.value - t;
                Some((t - rs, rs))
            }
            RayKind::FixedTSlice => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            RayKind::FixedRs => "fixed_rs",
            RayKind::Outgoing => "outgoing",
            RayKind::Ingoing => "ingoing",
            RayKind::FixedTSlice => "fixed_t_slice",
        }
    }
}

impl FromStr for RayKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fixed_rs" => Ok(RayKind::FixedRs),
            "outgoing" => Ok(RayKind::Outgoing),
            "ingoing" => Ok(RayKind::Ingoing),
            "fixed_t_slice" => Ok(RayKind::FixedTSlice),
            _ => Err(format!("unknown ray kind '{s}'")),
        }
    }
}

/// Samples along one ray: `(parameter, |value|)` in time order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RaySeries {
    pub points: Vec<(f64, f64)>,
    /// Set when the ray left the grid after having entered it.
    pub truncated: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry() {
        let r = RaySpec::new(RayKind::Outgoing, 20.0, Component::Phi1);
        assert_eq!(r.point(50.0), Some((80.0, 30.0)));
        let r = RaySpec::new(RayKind::Ingoing, 20.0, Component::Phi1);
        assert_eq!(r.point(50.0), Some((80.0, -30.0)));
        let r = RaySpec::new(RayKind::FixedRs, 3.0, Component::Phi1);
        assert_eq!(r.point(7.0), Some((7.0, 3.0)));
    }

    #[test]
    fn names_round_trip() {
        for c in Component::ALL {
            assert_eq!(c.name().parse::<Component>().unwrap(), c);
        }
        assert!("bogus".parse::<Component>().is_err());
    }
}
