//! Float helpers routed through `libm` so results do not depend on the
//! platform math library or on whether `std` is enabled.

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn asin(x: f64) -> f64 {
    libm::asin(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

/// `n` points spaced uniformly on `[lo, hi]`, endpoints included.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> alloc::vec::Vec<f64> {
    match n {
        0 => alloc::vec::Vec::new(),
        1 => alloc::vec![0.5 * (lo + hi)],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect()
        }
    }
}

/// `n` points spaced uniformly in `ln` on `[lo, hi]`, endpoints included.
pub(crate) fn logspace(lo: f64, hi: f64, n: usize) -> alloc::vec::Vec<f64> {
    let (a, b) = (ln(lo), ln(hi));
    let mut out: alloc::vec::Vec<f64> = linspace(a, b, n).into_iter().map(exp).collect();
    if let Some(first) = out.first_mut() {
        *first = lo;
    }
    if n > 1 {
        if let Some(last) = out.last_mut() {
            *last = hi;
        }
    }
    out
}

#[inline]
pub(crate) fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}
