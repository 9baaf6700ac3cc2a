//! The Muckenhoupt `A_p` functional, `(p,λ)`-admissibility and the
//! `𝒜_{p,λ}` functional
//!
//! ```text
//! 𝒜(B) = ‖χ_B‖_{p,λ;w} / ‖χ_B‖_{p,λ;w_*} · (1/|B|) ∫_B w^{-β},
//! w_* = w^{-(1-λ)/(λ+p-1)},  β = 1/(λ+p-1).
//! ```
//!
//! Averages divide by the length of the evaluated interval, so the unit
//! weight gives exactly `1` everywhere.

use crate::error::{Error, Result};
use crate::fmath::powf;
use crate::geometry::{Ball, BallFamily};
use crate::measure::weight_mass_1d;
use crate::morrey::char_norm_weighted;
use crate::params::MorreyParams;
use crate::report::{DivergenceCause, FunctionalReport};
use crate::search::search_sup;
use crate::weight::{dual_weight, Weight};

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "p", value: p, expected: "1 < p < inf" })
    }
}

fn average(w: &Weight, ball: &Ball) -> Result<f64> {
    let iv = ball.interval();
    Ok(weight_mass_1d(w, iv.lo, iv.hi)? / iv.len())
}

fn ap_on_ball(p: f64, w: &Weight, dual: &Weight, ball: &Ball) -> Result<f64> {
    Ok(average(w, ball)? * powf(average(dual, ball)?, p - 1.0))
}

/// `(avg_B w)(avg_B w^{1-p'})^{p-1}` for one ball on the line.
///
/// Both `w` and `w^{1-p'}` must be locally integrable everywhere, not only on `B`.
pub fn ap_functional(p: f64, w: &Weight, ball: &Ball) -> Result<f64> {
    check_p(p)?;
    w.validate(1)?;
    let dual = w.pow(-1.0 / (p - 1.0));
    dual.validate(1)?;
    ap_on_ball(p, w, &dual, ball)
}

/// Sup of the `A_p` functional over `fam`. Balls on which `w^{1-p'}` is not
/// integrable count as failures and flag the report.
pub fn ap_constant(p: f64, w: &Weight, fam: &BallFamily) -> Result<FunctionalReport> {
    check_p(p)?;
    w.validate(1)?;
    let dual = w.pow(-1.0 / (p - 1.0));
    let eval = |b: &Ball| ap_on_ball(p, w, &dual, b);
    Ok(search_sup(fam, &w.singular_points(), &eval))
}

/// Both admissibility sups for one probe ball.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Admissibility {
    /// `sup_B w(B ∩ B₀)/|B|^λ`.
    pub condition1: FunctionalReport,
    /// `sup_B w_*(B ∩ B₀)/|B|^λ`.
    pub condition2: FunctionalReport,
    /// Neither condition diverges.
    pub admissible: bool,
}

fn intersect_sup(params: &MorreyParams, w: &Weight, b0: &Ball, fam: &BallFamily) -> FunctionalReport {
    let iv0 = b0.interval();
    let eval = |b: &Ball| {
        let iv = b.interval();
        let mass = weight_mass_1d(w, iv.lo.max(iv0.lo), iv.hi.min(iv0.hi))?;
        Ok(mass / powf(b.measure(), params.lambda()))
    };
    let mut anchors = w.singular_points();
    anchors.push(b0.center);
    search_sup(fam, &anchors, &eval)
}

/// Checks `(p,λ)`-admissibility of `w` on the probe ball: both
/// `sup_B w(B ∩ B₀)/|B|^λ` and the same sup for `w_*` must stay bounded.
///
/// A dual exponent at or below `-1` is not rejected up front; the balls that
/// hit the singularity fail and flag condition 2.
pub fn admissible(params: &MorreyParams, w: &Weight, probe: &Ball, fam: &BallFamily) -> Result<Admissibility> {
    params.require_line("admissible")?;
    w.validate(1)?;
    let dual = w.pow(params.dual_exponent()?);
    let condition1 = intersect_sup(params, w, probe, fam);
    let condition2 = intersect_sup(params, &dual, probe, fam);
    let admissible = condition1.is_bounded() && condition2.is_bounded();
    Ok(Admissibility { condition1, condition2, admissible })
}

struct Apl<'a> {
    params: &'a MorreyParams,
    w: &'a Weight,
    dual: Weight,
    neg_beta: Weight,
    inner: &'a BallFamily,
}

impl Apl<'_> {
    fn new<'a>(params: &'a MorreyParams, w: &'a Weight, inner: &'a BallFamily) -> Result<Apl<'a>> {
        params.require_line("apl_functional")?;
        w.validate(1)?;
        let beta = params.beta()?;
        Ok(Apl { params, w, dual: w.pow(params.dual_exponent()?), neg_beta: w.pow(-beta), inner })
    }

    fn eval(&self, ball: &Ball) -> Result<f64> {
        let fam = self.inner.rescaled(ball);
        let num = char_norm_weighted(self.params, self.w, ball, &fam)?;
        if !num.is_bounded() {
            return Err(Error::Inadmissible { condition: 1 });
        }
        let den = char_norm_weighted(self.params, &self.dual, ball, &fam)?;
        if !den.is_bounded() {
            return Err(Error::Inadmissible { condition: 2 });
        }
        if den.value <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(num.value / den.value * average(&self.neg_beta, ball)?)
    }
}

/// `𝒜_{p,λ}` functional on one ball. `inner` is a unit template (see
/// [`BallFamily::coarse_template`]) rescaled to `ball` for both inner norms.
///
/// `w_*` and `w^{-β}` are checked symbolically for local integrability before
/// any quadrature.
pub fn apl_functional(params: &MorreyParams, w: &Weight, ball: &Ball, inner: &BallFamily) -> Result<f64> {
    let apl = Apl::new(params, w, inner)?;
    dual_weight(w, params)?;
    apl.neg_beta.validate(1)?;
    apl.eval(ball)
}

/// Sup of the `𝒜_{p,λ}` functional over `outer`, each inner norm estimated
/// with `inner` rescaled to the candidate ball.
///
/// Before the search the weight is checked for admissibility on a probe ball
/// covering the outer window. The report is flagged
/// [`DivergenceCause::Inadmissible`] when that check fails, and
/// [`DivergenceCause::NonIntegrable`] when `w^{-β}` or `w_*` cannot be
/// integrated on some candidate ball.
pub fn apl_constant(
    params: &MorreyParams,
    w: &Weight,
    outer: &BallFamily,
    inner: &BallFamily,
) -> Result<FunctionalReport> {
    let apl = Apl::new(params, w, inner)?;
    let center = 0.5 * (outer.center_lo() + outer.center_hi());
    let radius = 0.5 * (outer.center_hi() - outer.center_lo()) + outer.effective_radius_max();
    let probe = Ball::new(center, radius)?;
    let adm = admissible(params, w, &probe, &BallFamily::unit_template().rescaled(&probe))?;

    let eval = |b: &Ball| apl.eval(b);
    let report = search_sup(outer, &w.singular_points(), &eval);
    if !report.diverging && !adm.admissible {
        return Ok(report.flag(DivergenceCause::Inadmissible));
    }
    Ok(report)
}
