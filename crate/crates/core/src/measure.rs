//! Weighted measure `w(E) = ∫_E w` of intervals, balls and disks.
//!
//! Power and unit weights are integrated through their antiderivatives.
//! Tables are piecewise linear and integrated exactly. General products fall
//! back to Gauss–Legendre quadrature split at every knot and power center,
//! with geometric grading toward each power singularity.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fmath::{abs, asin, atan2, cos, expm1, ln_1p, powf, sin, sqrt};
use crate::geometry::{Ball, Disk, Interval};
use crate::params::MorreyParams;
use crate::quad::{gauss10, graded_toward, GRADING_LEVELS};
use crate::weight::{PlanarWeight, PowerWeight, Tabulated, Weight};

/// Intersection of two intervals, `None` when it has no interior.
pub fn intersect_1d(a: Interval, b: Interval) -> Option<Interval> {
    let lo = a.lo.max(b.lo);
    let hi = a.hi.min(b.hi);
    (hi > lo).then_some(Interval::new(lo, hi))
}

/// `∫_lo^hi w(t) dt`. Empty or reversed intervals give `0`.
pub fn weight_mass_1d(w: &Weight, lo: f64, hi: f64) -> Result<f64> {
    if !(hi > lo) {
        return Ok(0.0);
    }
    match w {
        Weight::Unit => Ok(hi - lo),
        Weight::Power(pw) => power_mass(pw.center, pw.exponent, lo, hi),
        Weight::Tabulated(t) => Ok(table_mass(t, lo, hi)),
        Weight::Product { factors } => {
            if let Some((c, pws)) = w.as_scaled_powers() {
                match pws.as_slice() {
                    [] => return Ok(c * (hi - lo)),
                    [pw] => return Ok(c * power_mass(pw.center, pw.exponent, lo, hi)?),
                    _ => {}
                }
            }
            if let [Weight::Tabulated(a), Weight::Tabulated(b)] = factors.as_slice() {
                if let Some(c) = a.as_constant() {
                    return Ok(c * table_mass(b, lo, hi));
                }
            }
            product_mass(w, lo, hi)
        }
    }
}

/// `w(B)` for a ball on the line. Planar balls go through [`weight_mass_disk`].
pub fn weight_mass_ball(w: &Weight, ball: &Ball, params: &MorreyParams) -> Result<f64> {
    params.require_line("weight_mass_ball")?;
    let iv = ball.interval();
    weight_mass_1d(w, iv.lo, iv.hi)
}

/// `∫_B |y - a|^ν dy` over a disk, by radial reduction about `a`: the radial
/// integral is exact and the angular one uses a periodic trapezoid rule
/// (256 points, doubled until the relative change drops below `1e-8`).
pub fn weight_mass_disk(w: &PlanarWeight, disk: &Disk) -> Result<f64> {
    let r = disk.radius;
    let (a, nu) = match *w {
        PlanarWeight::Unit => return Ok(disk.measure()),
        PlanarWeight::Power { center, exponent } => (center, exponent),
    };
    if nu == 0.0 {
        return Ok(disk.measure());
    }
    let (dx, dy) = (disk.center[0] - a[0], disk.center[1] - a[1]);
    let d = sqrt(dx * dx + dy * dy);
    let k = nu + 2.0;
    if d <= r && nu <= -2.0 {
        return Err(Error::NonIntegrable { exponent: nu, dim: 2 });
    }
    if d == 0.0 {
        return Ok(2.0 * PI * powf(r, k) / k);
    }
    let phi0 = atan2(dy, dx);
    let radial = |rho_lo: f64, rho_hi: f64| (powf(rho_hi, k) - powf(rho_lo, k)) / k;
    if d < r {
        // a is interior: every ray leaves the disk once
        let g = |theta: f64| {
            let b = d * cos(theta - phi0);
            let rho = b + sqrt(b * b + r * r - d * d);
            radial(0.0, rho)
        };
        Ok(periodic_trapezoid(&g))
    } else {
        // rays hit the disk only for |θ - φ0| < α; θ = φ0 + α sin u smooths the endpoints
        let alpha = asin((r / d).min(1.0));
        let g = |u: f64| {
            let (su, cu) = (sin(u), cos(u));
            let b = d * cos(alpha * su);
            let disc = (b * b - d * d + r * r).max(0.0);
            let rho_hi = b + sqrt(disc);
            let rho_lo = if rho_hi > 0.0 { ((d - r) * (d + r)).max(0.0) / rho_hi } else { 0.0 };
            0.5 * alpha * abs(cu) * radial(rho_lo, rho_hi)
        };
        Ok(periodic_trapezoid(&g))
    }
}

fn periodic_trapezoid(g: &impl Fn(f64) -> f64) -> f64 {
    let sum = |m: usize, offset: f64| -> f64 {
        let h = 2.0 * PI / m as f64;
        (0..m).map(|j| g(h * (j as f64 + offset))).sum::<f64>() * h
    };
    let mut m = 256;
    let mut current = sum(m, 0.0);
    while m < (1 << 20) {
        // doubling reuses the old nodes: new estimate = (old + midpoints) / 2
        let refined = 0.5 * (current + sum(m, 0.5));
        m *= 2;
        let done = abs(refined - current) <= 1e-8 * abs(refined);
        current = refined;
        if done {
            break;
        }
    }
    current
}

/// Exact `∫_lo^hi |t - a|^ν dt`, evaluated without cancellation when the
/// interval is short compared with its distance to `a`.
pub(crate) fn power_mass(a: f64, nu: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(hi > lo) {
        return Ok(0.0);
    }
    if nu == 0.0 {
        return Ok(hi - lo);
    }
    let (u1, u2) = (lo - a, hi - a);
    let k = nu + 1.0;
    if u1 <= 0.0 && u2 >= 0.0 {
        if nu <= -1.0 {
            return Err(Error::NonIntegrable { exponent: nu, dim: 1 });
        }
        return Ok((powf(-u1, k) + powf(u2, k)) / k);
    }
    let s1 = if u1 > 0.0 { u1 } else { -u2 };
    let q = ln_1p((hi - lo) / s1);
    if k == 0.0 {
        return Ok(q);
    }
    Ok(powf(s1, k) * expm1(k * q) / k)
}

/// Exact integral of the piecewise-linear table (constant outside the knots).
fn table_mass(t: &Tabulated, lo: f64, hi: f64) -> f64 {
    let xs = t.xs();
    let start = xs.partition_point(|&x| x <= lo);
    let end = xs.partition_point(|&x| x < hi);
    let mut acc = 0.0;
    let mut prev_x = lo;
    let mut prev_y = t.value(lo);
    for &x in &xs[start..end] {
        let y = t.value(x);
        acc += 0.5 * (prev_y + y) * (x - prev_x);
        prev_x = x;
        prev_y = y;
    }
    acc + 0.5 * (prev_y + t.value(hi)) * (hi - prev_x)
}

fn merged_powers(w: &Weight) -> Vec<PowerWeight> {
    let mut out: Vec<PowerWeight> = Vec::new();
    fn walk(w: &Weight, out: &mut Vec<PowerWeight>) {
        match w {
            Weight::Power(pw) => match out.iter_mut().find(|q| q.center == pw.center) {
                Some(q) => q.exponent += pw.exponent,
                None => out.push(*pw),
            },
            Weight::Product { factors } => factors.iter().for_each(|f| walk(f, out)),
            _ => {}
        }
    }
    walk(w, &mut out);
    out
}

fn knots(w: &Weight, out: &mut Vec<f64>) {
    match w {
        Weight::Tabulated(t) => out.extend_from_slice(t.xs()),
        Weight::Product { factors } => factors.iter().for_each(|f| knots(f, out)),
        _ => {}
    }
}

/// Value of `w` with the power factor centered at `s` removed.
fn value_without(w: &Weight, s: f64, x: f64) -> f64 {
    match w {
        Weight::Power(pw) if pw.center == s => 1.0,
        Weight::Product { factors } => factors.iter().map(|f| value_without(f, s, x)).product(),
        other => other.value(x),
    }
}

fn product_mass(w: &Weight, lo: f64, hi: f64) -> Result<f64> {
    let powers = merged_powers(w);
    for pw in &powers {
        if pw.exponent <= -1.0 && lo <= pw.center && pw.center <= hi {
            return Err(Error::NonIntegrable { exponent: pw.exponent, dim: 1 });
        }
    }
    let mut cuts: Vec<f64> = Vec::new();
    knots(w, &mut cuts);
    cuts.extend(powers.iter().map(|pw| pw.center));
    cuts.retain(|&x| lo < x && x < hi);
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let f = |x: f64| w.value(x);
    let singular_at = |x: f64| powers.iter().find(|pw| pw.center == x).copied();
    let graded = |s: f64, e: f64, pw: PowerWeight| {
        let g_s = value_without(w, s, s);
        graded_toward(&f, s, e, GRADING_LEVELS, |t| {
            let (a, b) = if t >= s { (s, t) } else { (t, s) };
            let m = power_mass(s, pw.exponent, a, b).unwrap_or(0.0);
            g_s * if t >= s { m } else { -m }
        })
    };

    let mut acc = 0.0;
    for seg in cuts.windows(2) {
        let (s, e) = (seg[0], seg[1]);
        let len = e - s;
        // powers just outside the segment behave like endpoint singularities
        let near = |x: f64| {
            powers.iter().any(|pw| pw.center != x && abs(pw.center - x) < len && !(s < pw.center && pw.center < e))
        };
        match (singular_at(s), singular_at(e)) {
            (Some(ps), Some(pe)) => {
                let m = 0.5 * (s + e);
                acc += graded(s, m, ps);
                acc -= graded(e, m, pe);
            }
            (Some(ps), None) => acc += graded(s, e, ps),
            (None, Some(pe)) => acc -= graded(e, s, pe),
            (None, None) => {
                if near(s) || near(e) {
                    let m = 0.5 * (s + e);
                    let plain =
                        |x: f64, y: f64| graded_toward(&f, x, y, GRADING_LEVELS, |t| f(0.5 * (x + t)) * (t - x));
                    acc += plain(s, m);
                    acc -= plain(e, m);
                } else {
                    let pieces = 4;
                    let h = len / pieces as f64;
                    for j in 0..pieces {
                        let a = s + h * j as f64;
                        let b = if j + 1 == pieces { e } else { a + h };
                        acc += gauss10(&f, a, b);
                    }
                }
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            let t = (tol / 2.0).max(1e-16 * whole.abs());
            rec(f, a, m, fa, flm, fm, left, t, depth - 1) + rec(f, m, b, fm, frm, fb, right, t, depth - 1)
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 24)
    }

    #[test]
    fn mass_examples() {
        assert_eq!(weight_mass_1d(&Weight::Unit, 0.0, 2.0).unwrap(), 2.0);
        let got = weight_mass_1d(&Weight::power(0.0, -0.5), 0.0, 1.0).unwrap();
        assert!((got - 2.0).abs() < 1e-14);
        let got = weight_mass_1d(&Weight::power(0.0, 1.0), -1.0, 1.0).unwrap();
        assert!((got - 1.0).abs() < 1e-14);
        assert_eq!(weight_mass_1d(&Weight::power(0.0, 1.0), 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(intersect_1d(Interval::new(0.0, 2.0), Interval::new(1.0, 3.0)), Some(Interval::new(1.0, 2.0)));
        assert_eq!(intersect_1d(Interval::new(0.0, 1.0), Interval::new(2.0, 3.0)), None);
        assert_eq!(intersect_1d(Interval::new(0.0, 1.0), Interval::new(0.0, 1.0)), Some(Interval::new(0.0, 1.0)));
    }

    #[test]
    fn non_integrable_power_is_reported() {
        let err = weight_mass_1d(&Weight::power(0.0, -1.0), 0.0, 2.0).unwrap_err();
        assert!(err.is_boundary());
        // away from the singularity the same weight is fine
        let got = weight_mass_1d(&Weight::power(0.0, -1.0), 1.0, 2.0).unwrap();
        assert!((got - core::f64::consts::LN_2).abs() < 1e-15);
        let got = weight_mass_1d(&Weight::power(0.0, -1.5), -4.0, -1.0).unwrap();
        assert!((got - 1.0).abs() < 1e-14);
    }

    #[test]
    fn power_mass_short_interval_far_away() {
        let hi = 1.0 + 1e-12;
        let got = power_mass(0.0, 0.3, 1.0, hi).unwrap();
        // integrand is within 1e-12 of 1 on the interval
        assert!((got / (hi - 1.0) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn table_mass_is_exact_for_linear_pieces() {
        let t = Tabulated::new(vec![0.0, 1.0, 3.0], vec![1.0, 3.0, 1.0]).unwrap();
        let w = Weight::Tabulated(t);
        // constant 1 on (-1, 0), triangle-ish up to 3
        let got = weight_mass_1d(&w, -1.0, 4.0).unwrap();
        assert!((got - (1.0 + 2.0 + 4.0 + 1.0)).abs() < 1e-14);
        let got = weight_mass_1d(&w, 0.5, 2.0).unwrap();
        assert!((got - (0.5 * (2.0 + 3.0) * 0.5 + 0.5 * (3.0 + 2.0) * 1.0)).abs() < 1e-14);
    }

    #[test]
    fn product_with_singular_power_matches_simpson_on_split_pieces() {
        let t = Tabulated::new(vec![-1.0, 0.5, 2.0], vec![1.0, 2.5, 0.7]).unwrap();
        let t2 = t.clone();
        let w = Weight::product([Weight::Tabulated(t), Weight::power(0.2, -0.6)]);
        let got = weight_mass_1d(&w, -0.5, 1.5).unwrap();
        // oracle: split at the knot, substitute x = 0.2 ± s^{1/0.4} next to the singularity
        // |x - 0.2|^-0.6 times the Jacobian k s^(k-1) is exactly k
        let f = |x: f64| w.value(x);
        let k = 1.0 / 0.4;
        let right = |s: f64| t2.value(0.2 + powf(s, k)) * k;
        let left = |s: f64| t2.value(0.2 - powf(s, k)) * k;
        let oracle = adaptive_simpson(&right, 0.0, powf(0.3, 0.4), 1e-12)
            + adaptive_simpson(&left, 0.0, powf(0.7, 0.4), 1e-12)
            + adaptive_simpson(&f, 0.5, 1.5, 1e-12);
        assert!((got - oracle).abs() < 1e-9 * oracle, "{got} vs {oracle}");
    }

    #[test]
    fn product_near_external_singularity() {
        let t = Tabulated::new(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        let w = Weight::product([Weight::Tabulated(t), Weight::power(-1e-3, -0.8)]);
        let got = weight_mass_1d(&w, 0.0, 1.0).unwrap();
        let f = |x: f64| w.value(x);
        let oracle = adaptive_simpson(&f, 0.0, 1.0, 1e-13);
        assert!((got - oracle).abs() < 1e-8 * oracle, "{got} vs {oracle}");
    }

    #[test]
    fn disk_examples() {
        let unit = weight_mass_disk(&PlanarWeight::Unit, &Disk::new([0.0, 0.0], 2.0).unwrap()).unwrap();
        assert!((unit - 4.0 * PI).abs() < 1e-13);
        let nu = -0.7;
        let w = PlanarWeight::Power { center: [0.0, 0.0], exponent: nu };
        let got = weight_mass_disk(&w, &Disk::new([0.0, 0.0], 1.5).unwrap()).unwrap();
        let expect = 2.0 * PI * powf(1.5, 2.0 + nu) / (2.0 + nu);
        assert!((got - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn disk_off_center_matches_polar_oracle_about_disk_center() {
        // oracle integrates in polar coordinates about the disk center
        for &(cx, nu) in &[(0.4, 0.5), (0.4, -1.2), (3.0, 1.5), (1.0, -0.5)] {
            let w = PlanarWeight::Power { center: [cx, 0.0], exponent: nu };
            let disk = Disk::new([0.0, 0.0], 1.0).unwrap();
            let got = weight_mass_disk(&w, &disk).unwrap();
            let m = 2000;
            let mut oracle = 0.0;
            for i in 0..m {
                let theta = 2.0 * PI * (i as f64 + 0.5) / m as f64;
                let (s, c) = (sin(theta), cos(theta));
                let f = |rho: f64| {
                    let (x, y) = (rho * c - cx, rho * s);
                    powf(x * x + y * y, 0.5 * nu) * rho
                };
                oracle += adaptive_simpson(&f, 0.0, 1.0, 1e-11) * 2.0 * PI / m as f64;
            }
            assert!((got - oracle).abs() < 2e-3 * oracle, "cx={cx} nu={nu}: {got} vs {oracle}");
        }
    }

    #[test]
    fn small_ball_far_from_singularity_sees_frozen_weight() {
        let params = MorreyParams::line(2.0, 0.3).unwrap();
        let w = Weight::power(0.0, 0.8);
        let ball = Ball::new(5.0, 0.05).unwrap();
        let got = weight_mass_ball(&w, &ball, &params).unwrap();
        let approx = ball.measure() * powf(5.0, 0.8);
        assert!((got / approx - 1.0).abs() < 0.05);

        let disk = Disk::new([5.0, 0.0], 0.05).unwrap();
        let w2 = PlanarWeight::Power { center: [0.0, 0.0], exponent: 0.8 };
        let got = weight_mass_disk(&w2, &disk).unwrap();
        assert!((got / (disk.measure() * powf(5.0, 0.8)) - 1.0).abs() < 0.05);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn additivity(a in -2.0f64..2.0, nu in -0.95f64..2.5, x in -3.0f64..3.0, y in -3.0f64..3.0, z in -3.0f64..3.0) {
                let mut v = [x, y, z];
                v.sort_by(f64::total_cmp);
                let w = Weight::power(a, nu);
                let whole = weight_mass_1d(&w, v[0], v[2]).unwrap();
                let parts = weight_mass_1d(&w, v[0], v[1]).unwrap() + weight_mass_1d(&w, v[1], v[2]).unwrap();
                prop_assert!((whole - parts).abs() <= 1e-12 * (1.0 + whole));
            }

            #[test]
            fn monotone_under_inclusion(nu in -0.95f64..2.5, lo in -2.0f64..0.0, hi in 0.0f64..2.0, grow in 0.0f64..1.0) {
                let w = Weight::power(0.3, nu);
                let inner = weight_mass_1d(&w, lo, hi).unwrap();
                let outer = weight_mass_1d(&w, lo - grow, hi + grow).unwrap();
                prop_assert!(outer >= inner);
            }

            #[test]
            fn exact_path_matches_quadrature_away_from_singularity(
                a in -2.0f64..2.0, nu in -3.0f64..3.0, gap in 0.05f64..1.0, len in 0.01f64..3.0, left in proptest::bool::ANY,
            ) {
                let (lo, hi) = if left { (a - gap - len, a - gap) } else { (a + gap, a + gap + len) };
                let w = Weight::power(a, nu);
                let exact = weight_mass_1d(&w, lo, hi).unwrap();
                let f = |x: f64| w.value(x);
                let quad = adaptive_simpson(&f, lo, hi, 1e-12 * exact);
                prop_assert!((exact - quad).abs() <= 1e-8 * exact, "{exact} vs {quad}");
            }
        }
    }
}
