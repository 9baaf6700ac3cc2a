//! Hilbert transform `Sf(x) = (1/π) p.v. ∫ f(t)/(t - x) dt` of step functions.
//!
//! For a step function the principal value is a finite sum of logarithms,
//!
//! ```text
//! Sf(x) = (1/π) Σ_i v_i ln(|x - b_{i+1}| / |x - b_i|),
//! ```
//!
//! exact for every `x` off the breakpoints. Each term is evaluated through
//! `ln_1p` when `x` lies outside the cell, so far-field values keep full
//! relative precision.
//!
//! The sharp lower bound of `Sχ_{I'}` on an adjacent interval of equal length
//! is `(1/π) ln 2`, attained at the far endpoint. The constant `1/2` often
//! quoted for this bound holds for the kernel without the `1/π` factor
//! (`ln 2 > 1/2`).

mod necessity;

pub use necessity::{
    necessity_functional, opnorm_lower_bound, opnorm_sweep, NecessityReport, OpnormBound, ShrinkingFamily, SweepPoint,
    TestKind, TestRatio, GROWTH_FACTOR,
};

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fmath::{ln, ln_1p};
use crate::geometry::{Ball, BallFamily, Interval};
use crate::morrey::char_norm_weighted;
use crate::params::MorreyParams;
use crate::report::FunctionalReport;
use crate::step::StepFunction;
use crate::weight::Weight;

/// `ln(|x - hi| / |x - lo|)`, the transform of `χ_(lo, hi)` times `π`.
pub(crate) fn cell_log(lo: f64, hi: f64, x: f64) -> f64 {
    // both outside branches divide by the distance to the nearer endpoint,
    // so mirrored configurations give mirrored bits
    if x < lo {
        ln_1p((hi - lo) / (lo - x))
    } else if x > hi {
        -ln_1p((hi - lo) / (x - hi))
    } else {
        ln(hi - x) - ln(x - lo)
    }
}

/// Transform without the breakpoint check.
pub(crate) fn transform(f: &StepFunction, x: f64) -> f64 {
    f.cells().map(|(lo, hi, v)| v * cell_log(lo, hi, x)).sum::<f64>() / PI
}

/// What to do when the evaluation point is a breakpoint, where the
/// transform has a logarithmic singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BreakpointPolicy {
    /// Return [`Error::Breakpoint`].
    Reject,
    /// Evaluate at `x + offset` instead.
    Offset(f64),
}

/// Exact `Sf(x)`; fails at breakpoints.
pub fn hilbert_step(f: &StepFunction, x: f64) -> Result<f64> {
    hilbert_step_with(f, x, BreakpointPolicy::Reject)
}

/// Exact `Sf(x)` with an explicit breakpoint policy.
pub fn hilbert_step_with(f: &StepFunction, x: f64, policy: BreakpointPolicy) -> Result<f64> {
    let on_break = |y: f64| f.breakpoints().binary_search_by(|b| b.total_cmp(&y)).is_ok();
    let x = match (on_break(x), policy) {
        (false, _) => x,
        (true, BreakpointPolicy::Offset(d)) if d != 0.0 && !on_break(x + d) => x + d,
        (true, _) => return Err(Error::Breakpoint { x }),
    };
    if !x.is_finite() {
        return Err(Error::InvalidParameter { name: "x", value: x, expected: "finite" });
    }
    Ok(transform(f, x))
}

/// Side of `I'` on which `I''` lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    /// `I''` ends where `I'` starts.
    Left,
    /// `I''` starts where `I'` ends.
    Right,
}

/// Two adjacent intervals of equal length at most `1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdjacentPair {
    i_prime: Interval,
    i_double_prime: Interval,
    side: Side,
}

impl AdjacentPair {
    /// Validates a pair: one shared endpoint, lengths equal to `1e-12`
    /// relative, common length in `(0, 1]`.
    pub fn new(i_prime: Interval, i_double_prime: Interval) -> Result<Self> {
        let (a, b) = (i_prime.len(), i_double_prime.len());
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidPair("intervals must have positive length"));
        }
        if (a - b).abs() > 1e-12 * a.max(b) {
            return Err(Error::InvalidPair("lengths differ"));
        }
        if a.max(b) > 1.0 {
            return Err(Error::InvalidPair("length exceeds 1"));
        }
        let side = if i_double_prime.hi == i_prime.lo {
            Side::Left
        } else if i_double_prime.lo == i_prime.hi {
            Side::Right
        } else {
            return Err(Error::InvalidPair("intervals do not share an endpoint"));
        };
        Ok(Self { i_prime, i_double_prime, side })
    }

    /// `I'` together with its neighbour of equal length on `side`.
    pub fn beside(i_prime: Interval, side: Side) -> Result<Self> {
        let len = i_prime.len();
        let other = match side {
            Side::Left => Interval::new(i_prime.lo - len, i_prime.lo),
            Side::Right => Interval::new(i_prime.hi, i_prime.hi + len),
        };
        Self::new(i_prime, other)
    }

    /// `I'`.
    pub fn i_prime(&self) -> Interval {
        self.i_prime
    }

    /// `I''`.
    pub fn i_double_prime(&self) -> Interval {
        self.i_double_prime
    }

    /// Side of `I'` on which `I''` lies.
    pub fn side(&self) -> Side {
        self.side
    }
}

/// `min_{x ∈ I''} σ Sχ_{I'}(x)` over `samples` points running from the far
/// endpoint of `I''` toward the shared one (which is excluded), with
/// `σ = +1` when `I''` is on the left and `-1` when on the right.
///
/// The exact minimum is `(1/π) ln 2`, attained at the far endpoint, which is
/// always the first sample.
pub fn adjacent_bound(pair: &AdjacentPair, samples: usize) -> f64 {
    let samples = samples.max(1);
    let (lo, hi) = (pair.i_prime.lo, pair.i_prime.hi);
    let dd = pair.i_double_prime;
    let h = dd.len() / samples as f64;
    (0..samples)
        .map(|j| match pair.side {
            Side::Left => cell_log(lo, hi, dd.lo + h * j as f64) / PI,
            Side::Right => -cell_log(lo, hi, dd.hi - h * j as f64) / PI,
        })
        .fold(f64::INFINITY, f64::min)
}

/// Norms of `χ_{I'}` and `χ_{I''}` and their ratio against `[1/(2k), 2k]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdjacentRatio {
    /// `‖χ_{I'}‖_{p,λ;w}`.
    pub norm_prime: FunctionalReport,
    /// `‖χ_{I''}‖_{p,λ;w}`.
    pub norm_double_prime: FunctionalReport,
    /// `‖χ_{I''}‖ / ‖χ_{I'}‖`.
    pub ratio: f64,
    /// `2k`.
    pub bound: f64,
    /// `1/(2k) <= ratio <= 2k`.
    pub within: bool,
}

pub(crate) fn check_k(k: f64) -> Result<()> {
    if k >= 1.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "k", value: k, expected: "1 <= k < inf" })
    }
}

/// Compares the weighted norms of the two indicators of an adjacent pair.
/// `template` is a unit family rescaled to each interval.
pub fn adjacent_norm_ratio(
    params: &MorreyParams,
    w: &Weight,
    pair: &AdjacentPair,
    template: &BallFamily,
    k: f64,
) -> Result<AdjacentRatio> {
    check_k(k)?;
    let norm = |iv: Interval| -> Result<FunctionalReport> {
        let ball: Ball = iv.to_ball();
        let rep = char_norm_weighted(params, w, &ball, &template.rescaled(&ball))?;
        if !rep.is_bounded() {
            return Err(Error::Inadmissible { condition: 1 });
        }
        if rep.value <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(rep)
    };
    let norm_prime = norm(pair.i_prime)?;
    let norm_double_prime = norm(pair.i_double_prime)?;
    let ratio = norm_double_prime.value / norm_prime.value;
    let bound = 2.0 * k;
    Ok(AdjacentRatio { norm_prime, norm_double_prime, ratio, bound, within: ratio >= 1.0 / bound && ratio <= bound })
}
