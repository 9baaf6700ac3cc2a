//! Necessity harness: the `𝒜_{p,λ}` functional over short intervals, and
//! lower bounds for the operator norm of `S` from explicit test functions.

use alloc::vec::Vec;

use super::{check_k, transform};
use crate::error::{Error, Result};
use crate::fmath::{linspace, logspace, powf};
use crate::geometry::{BallFamily, Interval};
use crate::measure::weight_mass_1d;
use crate::morrey::morrey_norm_step;
use crate::muckenhoupt::apl_constant;
use crate::params::MorreyParams;
use crate::quad::gauss10_points;
use crate::report::FunctionalReport;
use crate::search::par_map;
use crate::step::StepFunction;
use crate::weight::Weight;

/// Total growth across a shrinking family that counts as unboundedness.
pub const GROWTH_FACTOR: f64 = 10.0;

/// Half-width of the window on which `Sf` is integrated.
const DOMAIN: f64 = 16.0;
/// Uniform background nodes of the projection mesh.
const BACKGROUND_NODES: usize = 257;
/// Geometric ratio of the mesh toward feature points.
const MESH_RATIO: f64 = 1.25;
/// Grading depth of test functions toward an interior singularity.
const INTERIOR_GRADING: f64 = 1e-6;

/// `𝒜_{p,λ}` over intervals of length at most `1`, compared with `2k`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NecessityReport {
    /// Assumed operator norm `k >= 1`.
    pub k_hypothesis: f64,
    /// Sup of the functional over the capped family.
    pub functional_value: FunctionalReport,
    /// `2k`.
    pub bound_2k: f64,
    /// Value at most `2k` and not diverging.
    pub satisfied: bool,
}

/// Evaluates `sup_{|I| <= 1} 𝒜(I)` with the interval family capped at radius
/// `1/2` (a tighter cap already on the family is kept) and checks it against `2k`.
pub fn necessity_functional(
    params: &MorreyParams,
    w: &Weight,
    interval_fam: &BallFamily,
    inner: &BallFamily,
    k: f64,
) -> Result<NecessityReport> {
    check_k(k)?;
    let cap = interval_fam.max_radius_cap().map_or(0.5, |c| c.min(0.5));
    let fam = interval_fam.clone().with_radius_cap(Some(cap))?;
    let functional_value = apl_constant(params, w, &fam, inner)?;
    let bound_2k = 2.0 * k;
    let satisfied = functional_value.is_bounded() && functional_value.value <= bound_2k;
    Ok(NecessityReport { k_hypothesis: k, functional_value, bound_2k, satisfied })
}

/// Test function built on an interval `I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TestKind {
    /// `χ_I`.
    Indicator,
    /// Cell averages of `χ_I w^{-β}`.
    DualPower,
}

/// One evaluated test function.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestRatio {
    /// Support of the test function.
    pub interval: Interval,
    /// Kind of test function.
    pub kind: TestKind,
    /// Grid estimate of `‖f‖_{p,λ;w}`.
    pub norm_f: f64,
    /// Mesh lower bound of `‖Sf‖_{p,λ;w}`.
    pub norm_sf: f64,
    /// `norm_sf / norm_f`.
    pub ratio: f64,
}

/// Lower bound for `‖S‖` on `L^{p,λ}(w)` from a list of test functions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OpnormBound {
    /// Largest ratio over the evaluated tests.
    pub value: f64,
    /// Every evaluated test.
    pub tests: Vec<TestRatio>,
    /// Tests skipped because `w^{-β}` is not integrable on the interval.
    pub skipped: Vec<(Interval, TestKind)>,
}

/// `max ‖Sf‖/‖f‖` over `f ∈ {χ_I, χ_I w^{-β}}` for every `I` in `test_intervals`.
///
/// `χ_I w^{-β}` is replaced by its cell averages on `step_resolution` cells,
/// graded toward a nearby singularity of `w`, so that `Sf` stays exact.
/// `‖f‖` is the grid estimate of [`morrey_norm_step`] over `fam`. `‖Sf‖` is
/// bounded below by integrating `|Sf|^p w` on a mesh over `[-16, 16]` graded
/// toward the support ends and the singular points of `w`, and maximizing
/// `|B|^{-λ} ∫_B` over all balls whose ends are mesh nodes; only cells lying
/// inside a ball are counted.
pub fn opnorm_lower_bound(
    params: &MorreyParams,
    w: &Weight,
    test_intervals: &[Interval],
    fam: &BallFamily,
    step_resolution: usize,
) -> Result<OpnormBound> {
    params.require_line("opnorm_lower_bound")?;
    w.validate(1)?;
    if step_resolution < 2 {
        return Err(Error::InvalidParameter {
            name: "step_resolution",
            value: step_resolution as f64,
            expected: ">= 2",
        });
    }
    let neg_beta = w.pow(-params.beta()?);
    let singular = w.singular_points();

    let mut tests = Vec::new();
    let mut skipped = Vec::new();
    for &iv in test_intervals {
        if !(iv.len() > 0.0) || iv.lo < -0.5 * DOMAIN || iv.hi > 0.5 * DOMAIN {
            return Err(Error::InvalidParameter {
                name: "test_interval",
                value: iv.lo,
                expected: "non-empty and inside [-8, 8]",
            });
        }
        for kind in [TestKind::Indicator, TestKind::DualPower] {
            let f = match kind {
                TestKind::Indicator => StepFunction::indicator(iv.lo, iv.hi)?,
                TestKind::DualPower => match discretize(&neg_beta, iv, step_resolution, &singular) {
                    Ok(f) => f,
                    Err(Error::NonIntegrable { .. }) => {
                        skipped.push((iv, kind));
                        continue;
                    }
                    Err(e) => return Err(e),
                },
            };
            let norm_f = morrey_norm_step(params, w, &f, fam)?.value;
            if !(norm_f > 0.0) {
                return Err(Error::ZeroNorm);
            }
            let norm_sf = transform_norm_lower(params, w, &f)?;
            tests.push(TestRatio { interval: iv, kind, norm_f, norm_sf, ratio: norm_sf / norm_f });
        }
    }
    let value = tests.iter().map(|t| t.ratio).fold(0.0, f64::max);
    Ok(OpnormBound { value, tests, skipped })
}

fn distance(s: f64, iv: Interval) -> f64 {
    if s < iv.lo {
        iv.lo - s
    } else if s > iv.hi {
        s - iv.hi
    } else {
        0.0
    }
}

/// Cell averages of `g` on `iv`, graded toward the closest singular point
/// when it lies within one interval length.
fn discretize(g: &Weight, iv: Interval, res: usize, singular: &[f64]) -> Result<StepFunction> {
    let len = iv.len();
    let near = singular
        .iter()
        .copied()
        .filter(|&s| distance(s, iv) <= len)
        .min_by(|a, b| distance(*a, iv).total_cmp(&distance(*b, iv)));
    let mut nodes = match near {
        None => linspace(iv.lo, iv.hi, res + 1),
        Some(s) if iv.lo < s && s < iv.hi => {
            let half = (res / 2).max(1);
            let mut v: Vec<f64> =
                logspace(INTERIOR_GRADING * (s - iv.lo), s - iv.lo, half).into_iter().map(|t| s - t).collect();
            v.push(s);
            v.extend(logspace(INTERIOR_GRADING * (iv.hi - s), iv.hi - s, half).into_iter().map(|t| s + t));
            v
        }
        Some(s) => {
            let d = distance(s, iv);
            let start = if d > 0.0 { d } else { INTERIOR_GRADING * len };
            let t = logspace(start, d + len, res + 1);
            if s <= iv.lo {
                t.into_iter().map(|t| s + t).collect()
            } else {
                t.into_iter().rev().map(|t| s - t).collect()
            }
        }
    };
    nodes.retain(|&x| iv.lo < x && x < iv.hi);
    nodes.insert(0, iv.lo);
    nodes.push(iv.hi);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let values =
        nodes.windows(2).map(|c| Ok(weight_mass_1d(g, c[0], c[1])? / (c[1] - c[0]))).collect::<Result<Vec<f64>>>()?;
    StepFunction::new(nodes, values)
}

/// Nodes of the projection mesh for `f` and `w`.
fn projection_mesh(f: &StepFunction, singular: &[f64]) -> Vec<f64> {
    let mut nodes = linspace(-DOMAIN, DOMAIN, BACKGROUND_NODES);
    nodes.extend_from_slice(f.breakpoints());
    let Some((lo, hi)) = f.support() else { return nodes };
    let mut features = alloc::vec![lo, hi];
    features.extend(singular.iter().copied().filter(|s| s.abs() < DOMAIN));
    for (i, &q) in features.iter().enumerate() {
        let gap = features
            .iter()
            .enumerate()
            .filter(|&(j, &o)| j != i && o != q)
            .map(|(_, &o)| (o - q).abs())
            .fold(hi - lo, f64::min);
        let mut h = 1e-2 * gap;
        while h < 2.0 * DOMAIN {
            nodes.push(q - h);
            nodes.push(q + h);
            h *= MESH_RATIO;
        }
        nodes.push(q);
    }
    nodes.retain(|x| x.abs() <= DOMAIN);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

/// Lower bound for `‖Sf‖_{p,λ;w}` over balls with mesh-node ends.
fn transform_norm_lower(params: &MorreyParams, w: &Weight, f: &StepFunction) -> Result<f64> {
    let p = params.p();
    let lambda = params.lambda();
    let nodes = projection_mesh(f, &w.singular_points());
    let cells: Vec<(f64, f64)> = nodes.windows(2).map(|c| (c[0], c[1])).collect();
    // |Sf|^p averaged against w on each cell, times the exact w-mass
    let masses = par_map(&cells, |&(a, b)| -> Result<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for (x, c) in gauss10_points(a, b) {
            let wx = w.value(x);
            num += c * powf(transform(f, x).abs(), p) * wx;
            den += c * wx;
        }
        let m = weight_mass_1d(w, a, b)?;
        Ok(if den > 0.0 && den.is_finite() { num / den * m } else { 0.0 })
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;

    let starts: Vec<usize> = (0..cells.len()).collect();
    let best = par_map(&starts, |&i| {
        let mut acc = 0.0;
        let mut best: f64 = 0.0;
        for j in i..cells.len() {
            acc += masses[j];
            let v = acc / powf(nodes[j + 1] - nodes[i], lambda);
            if v > best {
                best = v;
            }
        }
        best
    });
    let sup = best.into_iter().fold(0.0, f64::max);
    Ok(powf(sup, 1.0 / p))
}

/// Test intervals sliding toward a singular point `a`: step `k` uses
/// `(a + ε_k, a + ε_k + length)` with `ε_k = scale_start · scale_ratio^k`.
///
/// Power weights are dilation invariant, so only the relative gap
/// `ε_k / length` matters; the sliding family is what separates bounded
/// from unbounded cases.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShrinkingFamily {
    /// Singular point the intervals approach.
    pub center: f64,
    /// Length of every test interval, at most `1`.
    pub length: f64,
    /// Gap at step 0.
    pub scale_start: f64,
    /// Gap ratio between consecutive steps, in `(0, 1)`.
    pub scale_ratio: f64,
    /// Number of steps.
    pub steps: usize,
    /// Cells per discretized test function.
    pub resolution: usize,
}

impl Default for ShrinkingFamily {
    fn default() -> Self {
        Self { center: 0.0, length: 1.0, scale_start: 0.1, scale_ratio: powf(10.0, -2.5), steps: 6, resolution: 48 }
    }
}

impl ShrinkingFamily {
    fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, value: f64, expected: &'static str| {
            Err(Error::InvalidParameter { name, value, expected })
        };
        if !(self.length > 0.0 && self.length <= 1.0) {
            return bad("length", self.length, "0 < length <= 1");
        }
        if !(self.scale_start > 0.0 && self.scale_start <= 1.0) {
            return bad("scale_start", self.scale_start, "0 < scale_start <= 1");
        }
        if !(self.scale_ratio > 0.0 && self.scale_ratio < 1.0) {
            return bad("scale_ratio", self.scale_ratio, "0 < scale_ratio < 1");
        }
        if self.steps < 2 {
            return bad("steps", self.steps as f64, ">= 2");
        }
        if self.resolution < 2 {
            return bad("resolution", self.resolution as f64, ">= 2");
        }
        if self.center.abs() + 2.0 > 0.5 * DOMAIN {
            return bad("center", self.center, "|center| <= 6");
        }
        Ok(())
    }

    /// Gap `ε_k`.
    pub fn gap(&self, k: usize) -> f64 {
        self.scale_start * powf(self.scale_ratio, k as f64)
    }

    /// Test interval of step `k`.
    pub fn interval(&self, k: usize) -> Interval {
        let lo = self.center + self.gap(k);
        Interval::new(lo, lo + self.length)
    }

    /// Ball family used for `‖f‖` at step `k`: centers over `[-16, 16]`, radii
    /// from a hundredth of the gap up to `16`, no probes.
    pub fn norm_family(&self, k: usize) -> Result<BallFamily> {
        let r_min = 1e-2 * self.gap(k).min(self.length);
        BallFamily::new(-DOMAIN, DOMAIN, 129, r_min, DOMAIN, 64)?.with_probes(0, 1e4, 2.0)
    }
}

/// Lower bounds along a shrinking family for one exponent `ν`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SweepPoint {
    /// Power exponent of `w = |x - a|^ν`.
    pub nu: f64,
    /// Operator-norm lower bound per family step.
    pub bounds: Vec<f64>,
    /// `bounds[last] / bounds[0]`.
    pub growth: f64,
    /// Non-decreasing with total growth at least [`GROWTH_FACTOR`], or the
    /// weight itself is invalid.
    pub diverging: bool,
    /// Why the point could not be evaluated.
    pub error: Option<Error>,
}

/// Runs [`opnorm_lower_bound`] for `w = |x - a|^ν` on every step of `family`,
/// for each `ν` in `nus`. Points are independent and evaluated in parallel
/// with the `parallel` feature; the output follows the order of `nus`.
pub fn opnorm_sweep(params: &MorreyParams, nus: &[f64], family: &ShrinkingFamily) -> Result<Vec<SweepPoint>> {
    params.require_line("opnorm_sweep")?;
    params.beta()?;
    family.validate()?;
    let jobs: Vec<(usize, usize)> = (0..nus.len()).flat_map(|i| (0..family.steps).map(move |k| (i, k))).collect();
    let results = par_map(&jobs, |&(i, k)| {
        let w = Weight::power(family.center, nus[i]);
        let fam = family.norm_family(k)?;
        opnorm_lower_bound(params, &w, &[family.interval(k)], &fam, family.resolution).map(|b| b.value)
    });

    let mut out = Vec::with_capacity(nus.len());
    let mut results = results.into_iter();
    for &nu in nus {
        let mut bounds = Vec::with_capacity(family.steps);
        let mut error = None;
        for _ in 0..family.steps {
            match results.next().expect("one result per job") {
                Ok(v) => bounds.push(v),
                Err(e) => error = error.or(Some(e)),
            }
        }
        if let Some(e) = error {
            out.push(SweepPoint { nu, bounds: Vec::new(), growth: f64::NAN, diverging: true, error: Some(e) });
            continue;
        }
        let growth = bounds[bounds.len() - 1] / bounds[0];
        let monotone = bounds.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
        out.push(SweepPoint { nu, bounds, growth, diverging: monotone && growth >= GROWTH_FACTOR, error: None });
    }
    Ok(out)
}
