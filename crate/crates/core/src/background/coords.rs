use super::Background;

/// Exponent above which the Kruskal maps are reported as saturated.
pub const KRUSKAL_EXPONENT_LIMIT: f64 = 700.0;

/// Null coordinates `u+ = t + rs`, `u- = t - rs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullCoords {
    pub plus: f64,
    pub minus: f64,
}

/// Kruskal-type coordinates `U+ = e^{u+/4M}`, `U- = -e^{-u-/4M}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KruskalCoords {
    pub plus: f64,
    pub minus: f64,
    /// Set when an exponent was clamped to [`KRUSKAL_EXPONENT_LIMIT`].
    pub saturated: bool,
}

pub fn null_coords(t: f64, rs: f64) -> NullCoords {
    NullCoords {
        plus: t + rs,
        minus: t - rs,
    }
}

pub fn kruskal_coords(t: f64, rs: f64, bg: &Background) -> KruskalCoords {
    let u = null_coords(t, rs);
    let four_m = 4.0 * bg.mass();
    let ep = u.plus / four_m;
    let em = -u.minus / four_m;
    let saturated = ep > KRUSKAL_EXPONENT_LIMIT || em > KRUSKAL_EXPONENT_LIMIT;
    KruskalCoords {
        plus: ep.min(KRUSKAL_EXPONENT_LIMIT).exp(),
        minus: -em.min(KRUSKAL_EXPONENT_LIMIT).exp(),
        saturated,
    }
}
