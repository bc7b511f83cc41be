use super::{Background, Radius};
use crate::error::BackgroundError;
use std::borrow::Cow;
use std::collections::BTreeMap;

/// Uniform lattice in the tortoise coordinate with precomputed geometry.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    background: Background,
    rs_min: f64,
    rs_max: f64,
    h: f64,
    rs: Vec<f64>,
    r: Vec<f64>,
    /// `r - 2M`, accurate where `r` itself has rounded onto the horizon.
    gap: Vec<f64>,
    f: Vec<f64>,
    /// `W = f / r^2`.
    weight: Vec<f64>,
    /// `dW/drs`.
    weight_derivative: Vec<f64>,
    trapping: Vec<f64>,
    potentials: BTreeMap<u32, Vec<f64>>,
}

impl RadialGrid {
    pub fn new(background: Background, rs_min: f64, rs_max: f64, n: usize) -> Result<Self, BackgroundError> {
        Self::with_potentials(background, rs_min, rs_max, n, &[])
    }

    /// Builds the grid and caches `V_l` for each listed degree.
    pub fn with_potentials(
        background: Background,
        rs_min: f64,
        rs_max: f64,
        n: usize,
        degrees: &[u32],
    ) -> Result<Self, BackgroundError> {
        if n < 16 {
            return Err(BackgroundError::InvalidGrid(format!("n = {n} is below the minimum of 16")));
        }
        if !(rs_min.is_finite() && rs_max.is_finite() && rs_min < 0.0 && rs_max > 0.0) {
            return Err(BackgroundError::InvalidGrid(format!(
                "bounds must satisfy rs_min < 0 < rs_max, got [{rs_min}, {rs_max}]"
            )));
        }
        let last = (n - 1) as f64;
        let h = (rs_max - rs_min) / last;
        // Convex combination keeps the midpoint exactly 0 for symmetric bounds and odd n.
        let rs: Vec<f64> = (0..n)
            .map(|i| {
                let i = i as f64;
                (rs_min * (last - i) + rs_max * i) / last
            })
            .collect();
        let radii = rs
            .iter()
            .map(|&x| background.radius(x))
            .collect::<Result<Vec<Radius>, _>>()?;
        let r = radii.iter().map(|p| p.areal).collect();
        let gap = radii.iter().map(|p| p.horizon_gap).collect();
        let f = radii.iter().map(|p| p.lapse()).collect();
        let weight = radii.iter().map(|&p| background.potential_weight(p)).collect();
        let weight_derivative = radii
            .iter()
            .map(|&p| background.potential_weight_derivative(p))
            .collect();
        let trapping = rs
            .iter()
            .zip(&radii)
            .map(|(&x, &p)| background.trapping_at(x, p))
            .collect();
        let mut grid = RadialGrid {
            background,
            rs_min,
            rs_max,
            h,
            rs,
            r,
            gap,
            f,
            weight,
            weight_derivative,
            trapping,
            potentials: BTreeMap::new(),
        };
        for &l in degrees {
            let v = grid.compute_potential(l);
            grid.potentials.insert(l, v);
        }
        Ok(grid)
    }

    fn compute_potential(&self, l: u32) -> Vec<f64> {
        let ll = f64::from(l) * f64::from(l + 1);
        self.weight.iter().map(|w| ll * w).collect()
    }

    pub fn background(&self) -> &Background {
        &self.background
    }
    pub fn mass(&self) -> f64 {
        self.background.mass()
    }
    pub fn len(&self) -> usize {
        self.rs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.rs.is_empty()
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn rs_min(&self) -> f64 {
        self.rs_min
    }
    pub fn rs_max(&self) -> f64 {
        self.rs_max
    }
    pub fn rs(&self) -> &[f64] {
        &self.rs
    }
    pub fn r(&self) -> &[f64] {
        &self.r
    }
    pub fn horizon_gap(&self) -> &[f64] {
        &self.gap
    }
    pub fn lapse(&self) -> &[f64] {
        &self.f
    }
    pub fn weight(&self) -> &[f64] {
        &self.weight
    }
    pub fn weight_derivative(&self) -> &[f64] {
        &self.weight_derivative
    }
    pub fn trapping(&self) -> &[f64] {
        &self.trapping
    }

    /// `V_l` on the grid, borrowed from the cache when available.
    pub fn potential(&self, l: u32) -> Cow<'_, [f64]> {
        match self.potentials.get(&l) {
            Some(v) => Cow::Borrowed(v),
            None => Cow::Owned(self.compute_potential(l)),
        }
    }

    /// Index of the node at `rs`, if `rs` lies on the lattice to rounding.
    pub fn node_of(&self, rs: f64) -> Option<usize> {
        let x = (rs - self.rs_min) / self.h;
        let i = x.round();
        if i < 0.0 || i >= self.len() as f64 || (x - i).abs() > 1e-9 {
            return None;
        }
        Some(i as usize)
    }

    /// Left node and fractional offset for linear interpolation at `rs`.
    pub fn locate(&self, rs: f64) -> Option<(usize, f64)> {
        if !(rs >= self.rs_min && rs <= self.rs_max) {
            return None;
        }
        let x = (rs - self.rs_min) / self.h;
        let i = (x.floor() as usize).min(self.len() - 2);
        Some((i, (x - i as f64).clamp(0.0, 1.0)))
    }

    /// Trapezoid weights `h (1/2, 1, ..., 1, 1/2)` applied to `values`.
    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        let n = self.len();
        let mut sum = 0.0;
        for (i, v) in values.into_iter().enumerate() {
            sum += if i == 0 || i + 1 == n { 0.5 * v } else { v };
        }
        sum * self.h
    }

    /// Same grid geometry with `(n - 1)` multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self, BackgroundError> {
        let degrees: Vec<u32> = self.potentials.keys().copied().collect();
        Self::with_potentials(
            self.background,
            self.rs_min,
            self.rs_max,
            (self.len() - 1) * factor + 1,
            &degrees,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spacing() {
        let g = RadialGrid::new(Background::default(), -200.0, 200.0, 4096).unwrap();
        assert!((g.h() - 400.0 / 4095.0).abs() < 1e-15);
        assert!((g.h() - 0.0977).abs() < 1e-3);
    }

    #[test]
    fn origin_node_is_photon_sphere() {
        let g = RadialGrid::new(Background::default(), -200.0, 200.0, 4097).unwrap();
        let i = g.node_of(0.0).unwrap();
        assert_eq!(g.rs()[i], 0.0);
        assert!((g.r()[i] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn invariants() {
        let g = RadialGrid::new(Background::default(), -300.0, 500.0, 2001).unwrap();
        for w in g.rs().windows(2) {
            assert!(w[1] > w[0]);
        }
        // r itself rounds onto 2M deep in the throat; the gap stays strictly ordered.
        for w in g.r().windows(2) {
            assert!(w[1] >= w[0]);
        }
        for w in g.horizon_gap().windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(g.horizon_gap().iter().all(|&x| x > 0.0));
        assert!(g.r().iter().all(|&r| r >= 2.0));
        assert!(g.lapse().iter().all(|&f| f > 0.0 && f < 1.0));
    }

    #[test]
    fn rejects_bad_bounds() {
        let bg = Background::default();
        assert!(RadialGrid::new(bg, -10.0, 10.0, 8).is_err());
        assert!(RadialGrid::new(bg, 1.0, 10.0, 100).is_err());
        assert!(RadialGrid::new(bg, -10.0, -1.0, 100).is_err());
    }

    #[test]
    fn lapse_is_derivative_of_radius() {
        let bg = Background::default();
        let err = |n: usize| {
            let g = RadialGrid::new(bg, -20.0, 20.0, n).unwrap();
            (1..g.len() - 1)
                .map(|i| ((g.r()[i + 1] - g.r()[i - 1]) / (2.0 * g.h()) - g.lapse()[i]).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(401) / err(801);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn potential_peak_at_photon_sphere() {
        let g = RadialGrid::with_potentials(Background::default(), -50.0, 50.0, 1001, &[1, 2]).unwrap();
        let centre = g.node_of(0.0).unwrap();
        for l in 1..=4 {
            let v = g.potential(l);
            let (imax, _) = v
                .iter()
                .enumerate()
                .fold((0, f64::MIN), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc });
            assert!(imax.abs_diff(centre) <= 1, "l = {l}");
        }
        assert!(matches!(g.potential(1), Cow::Borrowed(_)));
        assert!(matches!(g.potential(3), Cow::Owned(_)));
    }
}
