use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fmath::{linspace, logspace};

/// Surface measure `ω_n = |S^{n-1}|` of the unit sphere: `2` on the line, `2π` in the plane.
pub fn sphere_area(n: u32) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => f64::NAN,
    }
}

/// Lebesgue measure of a ball of radius `r`: `2r` on the line, `πr²` in the plane.
pub fn ball_measure(n: u32, r: f64) -> f64 {
    match n {
        1 => 2.0 * r,
        2 => PI * r * r,
        _ => f64::NAN,
    }
}

/// A bounded interval `[lo, hi]` on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    /// Left endpoint.
    pub lo: f64,
    /// Right endpoint.
    pub hi: f64,
}

impl Interval {
    /// Builds `[lo, hi]`; the caller guarantees `lo <= hi`.
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// Length `hi - lo`.
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    /// True when the interval has no interior.
    pub fn is_empty(&self) -> bool {
        !(self.hi > self.lo)
    }

    /// Midpoint.
    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Closed-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// The same interval viewed as a one-dimensional ball.
    pub fn to_ball(&self) -> Ball {
        Ball { center: self.center(), radius: 0.5 * self.len() }
    }
}

/// One-dimensional ball `I(x, r) = (x - r, x + r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ball {
    /// Center `x`.
    pub center: f64,
    /// Radius `r > 0`.
    pub radius: f64,
}

impl Ball {
    /// Validated constructor.
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter { name: "radius", value: radius, expected: "radius > 0" });
        }
        if !center.is_finite() {
            return Err(Error::InvalidParameter { name: "center", value: center, expected: "finite" });
        }
        Ok(Self { center, radius })
    }

    /// `[x - r, x + r]`.
    pub fn interval(&self) -> Interval {
        Interval::new(self.center - self.radius, self.center + self.radius)
    }

    /// Lebesgue measure `2r`.
    pub fn measure(&self) -> f64 {
        2.0 * self.radius
    }

    /// Lexicographic `(center, radius)` order used to break ties between maximizers.
    pub(crate) fn lex_less(&self, other: &Ball) -> bool {
        (self.center, self.radius) < (other.center, other.radius)
    }
}

/// Disk `B(x, r)` in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Disk {
    /// Center.
    pub center: [f64; 2],
    /// Radius `r > 0`.
    pub radius: f64,
}

impl Disk {
    /// Validated constructor.
    pub fn new(center: [f64; 2], radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter { name: "radius", value: radius, expected: "radius > 0" });
        }
        Ok(Self { center, radius })
    }

    /// Area `πr²`.
    pub fn measure(&self) -> f64 {
        ball_measure(2, self.radius)
    }
}

/// Finite grid of candidate balls (centers × log-spaced radii) together with
/// the refinement policy used by [`search_sup`](crate::search_sup).
///
/// Rounds after the base grid:
/// * `refine_rounds` zoom rounds shrink the center window and the log-radius
///   window by a factor 4 around the current maximizer;
/// * `probe_rounds` probe rounds push the smallest radius down by
///   `probe_shrink` each time. The report is flagged diverging when each of
///   the last two probes multiplied the value by at least `divergence_ratio`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BallFamily {
    center_lo: f64,
    center_hi: f64,
    center_count: usize,
    radius_min: f64,
    radius_max: f64,
    radius_count: usize,
    refine_rounds: usize,
    probe_rounds: usize,
    probe_shrink: f64,
    divergence_ratio: f64,
    max_radius_cap: Option<f64>,
}

/// Zoom factor applied per refinement round.
pub(crate) const ZOOM: f64 = 4.0;

impl BallFamily {
    /// Grid of `center_count` centers on `[center_lo, center_hi]` and
    /// `radius_count` radii log-spaced on `[radius_min, radius_max]`, with
    /// three zoom rounds and two probes shrinking by `10^4`.
    pub fn new(
        center_lo: f64,
        center_hi: f64,
        center_count: usize,
        radius_min: f64,
        radius_max: f64,
        radius_count: usize,
    ) -> Result<Self> {
        let fam = Self {
            center_lo,
            center_hi,
            center_count,
            radius_min,
            radius_max,
            radius_count,
            refine_rounds: 3,
            probe_rounds: 2,
            probe_shrink: 1e4,
            divergence_ratio: 2.0,
            max_radius_cap: None,
        };
        fam.validate()?;
        Ok(fam)
    }

    /// Default family for a target supported on `[lo, hi]`: 129 centers over
    /// the support enlarged by `2 r_max`, 64 radii on `[1e-4 L, L]`, `L = hi - lo`.
    pub fn covering(lo: f64, hi: f64) -> Result<Self> {
        let len = hi - lo;
        if !(len > 0.0) {
            return Err(Error::InvalidFamily("support must have positive length"));
        }
        Self::new(lo - 2.0 * len, hi + 2.0 * len, 129, 1e-4 * len, len, 64)
    }

    /// Unit template for norms of indicators: centers on `[-2, 2]`, radii on
    /// `[1e-4, 1]`. Use [`BallFamily::rescaled`] to place it around a ball.
    pub fn unit_template() -> Self {
        Self::new(-2.0, 2.0, 129, 1e-4, 1.0, 64).expect("static family")
    }

    /// Coarse unit template (33 × 24, one zoom round, no probes) for the inner
    /// norms of nested sups.
    pub fn coarse_template() -> Self {
        Self::new(-2.0, 2.0, 33, 1e-4, 1.0, 24)
            .expect("static family")
            .with_refine_rounds(1)
            .with_probes(0, 1e4, 2.0)
            .expect("static family")
    }

    /// Sets the number of zoom rounds.
    pub fn with_refine_rounds(mut self, rounds: usize) -> Self {
        self.refine_rounds = rounds;
        self
    }

    /// Sets the probe policy.
    pub fn with_probes(mut self, rounds: usize, shrink: f64, ratio: f64) -> Result<Self> {
        self.probe_rounds = rounds;
        self.probe_shrink = shrink;
        self.divergence_ratio = ratio;
        self.validate()?;
        Ok(self)
    }

    /// Caps admissible radii (e.g. `1/2` for intervals of length at most 1).
    pub fn with_radius_cap(mut self, cap: Option<f64>) -> Result<Self> {
        self.max_radius_cap = cap;
        self.validate()?;
        Ok(self)
    }

    /// Replaces the radius window.
    pub fn with_radii(mut self, radius_min: f64, radius_max: f64, radius_count: usize) -> Result<Self> {
        self.radius_min = radius_min;
        self.radius_max = radius_max;
        self.radius_count = radius_count;
        self.validate()?;
        Ok(self)
    }

    /// Replaces the center window.
    pub fn with_centers(mut self, lo: f64, hi: f64, count: usize) -> Result<Self> {
        self.center_lo = lo;
        self.center_hi = hi;
        self.center_count = count;
        self.validate()?;
        Ok(self)
    }

    /// Interprets `self` in units of `ball`: center `c ↦ x₀ + r₀ c`, radius `r ↦ r₀ r`.
    pub fn rescaled(&self, ball: &Ball) -> Self {
        let (x0, r0) = (ball.center, ball.radius);
        Self {
            center_lo: x0 + r0 * self.center_lo,
            center_hi: x0 + r0 * self.center_hi,
            radius_min: r0 * self.radius_min,
            radius_max: r0 * self.radius_max,
            max_radius_cap: self.max_radius_cap.map(|c| c * r0),
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.center_lo, self.center_hi, self.radius_min, self.radius_max];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFamily("non-finite bound"));
        }
        if self.center_lo > self.center_hi {
            return Err(Error::InvalidFamily("center_lo > center_hi"));
        }
        if !(self.radius_min > 0.0 && self.radius_min < self.radius_max) {
            return Err(Error::InvalidFamily("need 0 < radius_min < radius_max"));
        }
        if self.center_count < 2 || self.radius_count < 2 {
            return Err(Error::InvalidFamily("counts must be at least 2"));
        }
        if !(self.probe_shrink > 1.0 && self.probe_shrink.is_finite()) {
            return Err(Error::InvalidFamily("probe_shrink must exceed 1"));
        }
        if !(self.divergence_ratio > 1.0) {
            return Err(Error::InvalidFamily("divergence_ratio must exceed 1"));
        }
        if let Some(cap) = self.max_radius_cap {
            if !(cap >= self.radius_min) {
                return Err(Error::InvalidFamily("max_radius_cap below radius_min"));
            }
        }
        Ok(())
    }

    /// Left end of the center window.
    pub fn center_lo(&self) -> f64 {
        self.center_lo
    }
    /// Right end of the center window.
    pub fn center_hi(&self) -> f64 {
        self.center_hi
    }
    /// Number of grid centers.
    pub fn center_count(&self) -> usize {
        self.center_count
    }
    /// Smallest radius of the base grid.
    pub fn radius_min(&self) -> f64 {
        self.radius_min
    }
    /// Largest radius of the base grid, before the cap.
    pub fn radius_max(&self) -> f64 {
        self.radius_max
    }
    /// Number of grid radii.
    pub fn radius_count(&self) -> usize {
        self.radius_count
    }
    /// Zoom rounds.
    pub fn refine_rounds(&self) -> usize {
        self.refine_rounds
    }
    /// Probe rounds.
    pub fn probe_rounds(&self) -> usize {
        self.probe_rounds
    }
    /// Radius shrink factor per probe.
    pub fn probe_shrink(&self) -> f64 {
        self.probe_shrink
    }
    /// Growth factor per probe that counts as blowup.
    pub fn divergence_ratio(&self) -> f64 {
        self.divergence_ratio
    }
    /// Optional radius cap.
    pub fn max_radius_cap(&self) -> Option<f64> {
        self.max_radius_cap
    }

    /// Largest admissible radius.
    pub fn effective_radius_max(&self) -> f64 {
        match self.max_radius_cap {
            Some(cap) => self.radius_max.min(cap),
            None => self.radius_max,
        }
    }

    pub(crate) fn centers(&self) -> Vec<f64> {
        linspace(self.center_lo, self.center_hi, self.center_count)
    }

    pub(crate) fn radii(&self) -> Vec<f64> {
        let hi = self.effective_radius_max();
        if hi <= self.radius_min {
            return alloc::vec![self.radius_min];
        }
        logspace(self.radius_min, hi, self.radius_count)
    }
}
