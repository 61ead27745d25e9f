//! Closed-form area, genus and systole inequalities for minimal surfaces
//! in hyperbolic 3-manifolds. Lengths and areas are for curvature -1.

use std::f64::consts::PI;

use serde::Serialize;

/// Relative slack used when rounding areas up to a genus.
pub const TOLERANCE: f64 = 1e-12;

/// Lower bound `2 pi (cosh r - 1)` on the area of a minimal surface inside
/// an embedded ball of radius `r` about a point of the surface.
pub fn ball_area_bound(r: f64) -> f64 {
    2.0 * PI * (r.cosh() - 1.0)
}

/// Smallest integer `g` with `g >= area / 4 pi + 1`. Values within
/// [`TOLERANCE`] (relative) below an integer round down to it.
pub fn min_genus_from_area(area: f64) -> u64 {
    let x = area / (4.0 * PI) + 1.0;
    let f = x.floor();
    if x - f <= TOLERANCE * x.max(1.0) {
        f as u64
    } else {
        f as u64 + 1
    }
}

/// Area lower bound from the systole: the surface contains a ball of
/// radius `sys / 2`.
pub fn min_area_from_systole(sys: f64) -> f64 {
    ball_area_bound(sys / 2.0)
}

/// `max(2 acosh 3, min(2 acosh 4.5, 4 acosh 3))`, which is `2 acosh 4.5`.
pub fn genus2_exclusion_threshold() -> f64 {
    let v = (2.0 * 3f64.acosh()).max((2.0 * 4.5f64.acosh()).min(4.0 * 3f64.acosh()));
    debug_assert!((v - 2.0 * 4.5f64.acosh()).abs() < TOLERANCE);
    v
}

/// Strictly above the threshold rules out genus-2 minimal surfaces.
pub fn excludes_genus2(sys: f64) -> bool {
    sys > genus2_exclusion_threshold()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystoleBounds {
    pub sys: f64,
    pub min_area: f64,
    pub min_genus: u64,
    pub threshold: f64,
    pub excludes_genus2: bool,
}

pub fn from_systole(sys: f64) -> SystoleBounds {
    let min_area = min_area_from_systole(sys);
    SystoleBounds {
        sys,
        min_area,
        min_genus: min_genus_from_area(min_area),
        threshold: genus2_exclusion_threshold(),
        excludes_genus2: excludes_genus2(sys),
    }
}
