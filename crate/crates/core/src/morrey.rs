//! Weighted Morrey norms `‖f‖_{p,λ;w} = sup_B (|B|^{-λ} ∫_B |f|^p w)^{1/p}`.
//!
//! Every estimator maximizes over a [`BallFamily`], so the values are lower
//! estimates of the true norm. For indicators of balls the closed form in the
//! unweighted case and a two-sided bracket in the weighted case are available
//! as cross-checks.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath::{ln, powf, sqrt};
use crate::geometry::{ball_measure, Ball, BallFamily};
use crate::measure::weight_mass_1d;
use crate::params::MorreyParams;
use crate::report::FunctionalReport;
use crate::search::search_sup;
use crate::step::StepFunction;
use crate::weight::{PowerWeight, Weight};

/// Regression residual (rms, natural-log units) above which an exponent fit
/// is flagged.
pub const FIT_RESIDUAL_WARN: f64 = 1e-3;

/// `‖χ_B‖_{p,λ} = |B|^{(1-λ)/p}` for a ball of the given radius in dimension
/// `params.n()`, with `|B|` the Lebesgue measure.
pub fn char_norm_unweighted(params: &MorreyParams, radius: f64) -> f64 {
    powf(ball_measure(params.n(), radius), (1.0 - params.lambda()) / params.p())
}

fn morrey_value(params: &MorreyParams, mass: f64, ball: &Ball) -> f64 {
    powf(mass / powf(ball.measure(), params.lambda()), 1.0 / params.p())
}

fn anchors_for(w: &Weight, extra: &[f64]) -> Vec<f64> {
    let mut pts = w.singular_points();
    pts.extend_from_slice(extra);
    pts
}

/// Grid estimate of `‖χ_{B₀}‖_{p,λ;w} = sup_B (w(B ∩ B₀)/|B|^λ)^{1/p}` on the line.
///
/// `fam` is used as given; [`BallFamily::unit_template`] rescaled to `b0`
/// covers every ball that can matter (larger radii only lose). The center of
/// `b0` and the singular points of `w` are always among the candidates.
pub fn char_norm_weighted(params: &MorreyParams, w: &Weight, b0: &Ball, fam: &BallFamily) -> Result<FunctionalReport> {
    params.require_line("char_norm_weighted")?;
    w.validate(1)?;
    let iv0 = b0.interval();
    let eval = |b: &Ball| {
        let iv = b.interval();
        let mass = weight_mass_1d(w, iv.lo.max(iv0.lo), iv.hi.min(iv0.hi))?;
        Ok(morrey_value(params, mass, b))
    };
    Ok(search_sup(fam, &anchors_for(w, &[b0.center]), &eval))
}

/// Two-sided estimate of `‖χ_{B₀}‖_{p,λ;w}` from a single family.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormBracket {
    /// `sup_{r <= r₀} (w(B(x₀, r))/|B(x₀, r)|^λ)^{1/p}` over the family radii.
    pub lower: f64,
    /// The grid estimate of the norm itself.
    pub estimate: FunctionalReport,
    /// `sup (w(B(x, r))/|B(x, r)|^λ)^{1/p}` over `|x - x₀| < 2r₀`, `r <= r₀`.
    pub upper: f64,
}

/// Lower member, estimate and upper member of the localization bracket for
/// `‖χ_{B₀}‖_{p,λ;w}`. The lower member uses centered balls inside `B₀`, the
/// upper one drops the intersection with `B₀` and restricts centers to
/// `|x - x₀| < 2r₀`; the upper search is also evaluated at the estimate's
/// maximizer so that `lower <= estimate <= upper` holds by construction.
pub fn char_norm_bracket(params: &MorreyParams, w: &Weight, b0: &Ball, fam: &BallFamily) -> Result<NormBracket> {
    let estimate = char_norm_weighted(params, w, b0, fam)?;
    let full = |b: &Ball| {
        let iv = b.interval();
        Ok(morrey_value(params, weight_mass_1d(w, iv.lo, iv.hi)?, b))
    };

    let mut lower: f64 = 0.0;
    for r in fam.radii().into_iter().filter(|&r| r <= b0.radius) {
        lower = lower.max(full(&Ball { center: b0.center, radius: r })?);
    }

    let (x0, r0) = (b0.center, b0.radius);
    let r_min = fam.radius_min().min(0.5 * r0);
    let local = fam
        .clone()
        .with_centers(x0 - 2.0 * r0, x0 + 2.0 * r0, fam.center_count())?
        .with_radii(r_min, r0, fam.radius_count())?
        .with_radius_cap(None)?;
    let mut upper = search_sup(&local, &anchors_for(w, &[x0]), &full).value;
    let arg = estimate.argmax;
    let at_arg = if arg.radius <= r0 { arg } else { *b0 };
    upper = upper.max(full(&at_arg)?);
    Ok(NormBracket { lower, estimate, upper })
}

/// Grid estimate of `‖f‖_{p,λ;w}` for a step function on the line.
///
/// The inner integral is cell-exact: `|f|^p` is constant on each cell and the
/// weight is integrated over every cell-ball intersection.
pub fn morrey_norm_step(
    params: &MorreyParams,
    w: &Weight,
    f: &StepFunction,
    fam: &BallFamily,
) -> Result<FunctionalReport> {
    params.require_line("morrey_norm_step")?;
    w.validate(1)?;
    let p = params.p();
    let cells: Vec<(f64, f64, f64)> = f.cells().map(|(lo, hi, v)| (lo, hi, powf(v.abs(), p))).collect();
    let full: Vec<f64> = cells.iter().map(|&(lo, hi, c)| Ok(c * weight_mass_1d(w, lo, hi)?)).collect::<Result<_>>()?;

    let eval = |b: &Ball| {
        let iv = b.interval();
        let i = cells.partition_point(|c| c.1 <= iv.lo);
        let j = cells.partition_point(|c| c.0 < iv.hi);
        let mut acc = 0.0;
        for k in i..j {
            let (lo, hi, c) = cells[k];
            acc +=
                if iv.lo <= lo && hi <= iv.hi { full[k] } else { c * weight_mass_1d(w, lo.max(iv.lo), hi.min(iv.hi))? };
        }
        Ok(morrey_value(params, acc, b))
    };
    Ok(search_sup(fam, &anchors_for(w, f.breakpoints()), &eval))
}

/// Least-squares fit of `log ‖χ_{B(a, r)}‖_{p,λ;w}` against `log |B(a, r)|`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentFit {
    /// Fitted slope.
    pub slope: f64,
    /// Fitted intercept.
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// `residual > FIT_RESIDUAL_WARN`.
    pub warning: bool,
    /// Predicted slope `(1 + ν - λ)/p`.
    pub theory: f64,
    /// `(log |B|, log norm)` pairs.
    pub points: Vec<(f64, f64)>,
}

/// Fits the scaling exponent of `‖χ_{B(a, r)}‖_{p,λ;w}` for `w = |x - a|^ν`.
///
/// Each norm is estimated with `template` rescaled to the ball. The radii must
/// span at least one decade, and every estimate must be bounded.
pub fn exponent_fit(
    params: &MorreyParams,
    w: &PowerWeight,
    radii: &[f64],
    template: &BallFamily,
) -> Result<ExponentFit> {
    params.require_line("exponent_fit")?;
    if radii.len() < 2 || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter {
            name: "radii",
            value: radii.len() as f64,
            expected: "at least two positive radii",
        });
    }
    let (rmin, rmax) = radii.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    if rmax < 10.0 * rmin {
        return Err(Error::InvalidParameter {
            name: "radii",
            value: rmax / rmin,
            expected: "span of at least one decade",
        });
    }
    let weight = Weight::Power(*w);
    let mut points = Vec::with_capacity(radii.len());
    for &r in radii {
        let ball = Ball::new(w.center, r)?;
        let rep = char_norm_weighted(params, &weight, &ball, &template.rescaled(&ball))?;
        if !rep.is_bounded() || rep.value <= 0.0 {
            return Err(Error::Inadmissible { condition: 1 });
        }
        points.push((ln(ball.measure()), ln(rep.value)));
    }

    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxx, sxy) =
        points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + (x - mx) * (x - mx), b + (x - mx) * (y - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = points.iter().map(|&(x, y)| (y - intercept - slope * x) * (y - intercept - slope * x)).sum();
    let residual = sqrt(ss / m);
    Ok(ExponentFit {
        slope,
        intercept,
        residual,
        warning: residual > FIT_RESIDUAL_WARN,
        theory: (1.0 + w.exponent - params.lambda()) / params.p(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fmath::logspace;
    use proptest::prelude::*;

    fn line(p: f64, lambda: f64) -> MorreyParams {
        MorreyParams::line(p, lambda).unwrap()
    }

    fn unit_ball() -> Ball {
        Ball::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn unweighted_closed_form_examples() {
        assert!((char_norm_unweighted(&line(2.0, 0.5), 1.0) - 1.189207115).abs() < 1e-9);
        assert!((char_norm_unweighted(&line(3.0, 0.0), 0.5) - 1.0).abs() < 1e-15);
        let plane = MorreyParams::new(1.0, 0.0, 2).unwrap();
        assert!((char_norm_unweighted(&plane, 1.0) - core::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn unit_weight_estimator_hits_closed_form() {
        for &(p, lambda) in &[(1.0, 0.0), (2.0, 0.3), (4.0, 0.7)] {
            let params = line(p, lambda);
            let b0 = unit_ball();
            let fam = BallFamily::unit_template().rescaled(&b0);
            let rep = char_norm_weighted(&params, &Weight::Unit, &b0, &fam).unwrap();
            let exact = char_norm_unweighted(&params, 1.0);
            assert!(rep.value <= exact + 1e-8);
            assert!((rep.value / exact - 1.0).abs() < 1e-12, "{} vs {exact}", rep.value);
            assert!(!rep.diverging);
        }
    }

    #[test]
    fn power_below_threshold_diverges() {
        let params = line(2.0, 0.3);
        let b0 = unit_ball();
        let w = Weight::power(0.0, 0.3 - 1.0 - 0.2);
        let rep = char_norm_weighted(&params, &w, &b0, &BallFamily::unit_template().rescaled(&b0)).unwrap();
        assert!(rep.diverging);
    }

    #[test]
    fn bracket_orders() {
        let params = line(2.0, 0.4);
        let b0 = Ball::new(0.3, 0.5).unwrap();
        let w = Weight::power(0.0, -0.4);
        let br = char_norm_bracket(&params, &w, &b0, &BallFamily::unit_template().rescaled(&b0)).unwrap();
        assert!(br.lower <= br.estimate.value && br.estimate.value <= br.upper, "{br:?}");
        assert!(br.lower > 0.0);
    }

    #[test]
    fn step_norm_examples() {
        let params = line(2.0, 0.5);
        let f = StepFunction::indicator(-1.0, 1.0).unwrap();
        let fam = BallFamily::covering(-1.0, 1.0).unwrap();
        let rep = morrey_norm_step(&params, &Weight::Unit, &f, &fam).unwrap();
        assert!((rep.value / powf(2.0, 0.25) - 1.0).abs() < 0.02);
        let zero = morrey_norm_step(&params, &Weight::Unit, &StepFunction::zero(), &fam).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn fit_examples() {
        let t = BallFamily::unit_template();
        let radii = logspace(1e-2, 1.0, 7);
        let fit = exponent_fit(&line(2.0, 0.4), &PowerWeight::new(0.0, 0.3), &radii, &t).unwrap();
        assert!((fit.slope - 0.45).abs() < 0.02, "{fit:?}");
        let fit = exponent_fit(&line(1.0, 0.0), &PowerWeight::new(0.0, 1.0), &radii, &t).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-6, "{fit:?}");
        assert!(!fit.warning);
        let fit = exponent_fit(&line(3.0, 0.0), &PowerWeight::new(0.0, 0.0), &radii, &t).unwrap();
        assert!((fit.slope - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn fit_rejects_narrow_radii() {
        let err = exponent_fit(&line(2.0, 0.4), &PowerWeight::new(0.0, 0.3), &[0.5, 1.0], &BallFamily::unit_template());
        assert!(matches!(err, Err(Error::InvalidParameter { .. })));
    }

    fn small_family(lo: f64, hi: f64) -> BallFamily {
        let len = hi - lo;
        BallFamily::new(lo - len, hi + len, 33, 1e-3 * len, len, 16).unwrap().with_refine_rounds(1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn homogeneity(c in -5.0f64..5.0, a in -1.0f64..0.0, len in 0.1f64..2.0, v in 0.2f64..3.0) {
            let params = line(2.0, 0.4);
            let f = StepFunction::new(vec![a, a + len, a + 2.0 * len], vec![1.0, v]).unwrap();
            let fam = small_family(a, a + 2.0 * len);
            let w = Weight::power(0.1, 0.5);
            let base = morrey_norm_step(&params, &w, &f, &fam).unwrap().value;
            let scaled = morrey_norm_step(&params, &w, &f.scale(c), &fam).unwrap().value;
            prop_assert!((scaled - c.abs() * base).abs() <= 1e-12 * base.max(1.0));
        }

        #[test]
        fn translation_invariance_for_unit_weight(x0 in -50.0f64..50.0, r0 in 0.1f64..3.0) {
            let params = line(2.0, 0.3);
            let shifted = Ball::new(x0, r0).unwrap();
            let origin = Ball::new(0.0, r0).unwrap();
            let t = BallFamily::unit_template().with_refine_rounds(1);
            let a = char_norm_weighted(&params, &Weight::Unit, &shifted, &t.rescaled(&shifted)).unwrap().value;
            let b = char_norm_weighted(&params, &Weight::Unit, &origin, &t.rescaled(&origin)).unwrap().value;
            prop_assert!((a / b - 1.0).abs() < 1e-12);
        }

        #[test]
        fn monotone_in_lambda_on_small_support(l1 in 0.0f64..0.9, dl in 0.0f64..0.09, len in 0.05f64..0.45) {
            let f = StepFunction::new(vec![0.0, len, 2.0 * len], vec![1.0, 0.5]).unwrap();
            let fam = small_family(0.0, 2.0 * len);
            let w = Weight::power(0.3 * len, 0.4);
            let lo = morrey_norm_step(&line(2.0, l1), &w, &f, &fam).unwrap();
            let hi = morrey_norm_step(&line(2.0, l1 + dl), &w, &f, &fam).unwrap();
            prop_assume!(lo.argmax.measure() <= 1.0);
            prop_assert!(hi.value >= lo.value * (1.0 - 1e-12));
        }

        #[test]
        fn trace_is_monotone(nu in -0.6f64..1.5, x0 in -1.0f64..1.0) {
            let params = line(2.0, 0.4);
            let b0 = Ball::new(x0, 0.5).unwrap();
            let t = BallFamily::unit_template().with_refine_rounds(2);
            let rep = char_norm_weighted(&params, &Weight::power(0.0, nu), &b0, &t.rescaled(&b0)).unwrap();
            prop_assert!(rep.refine_trace.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
