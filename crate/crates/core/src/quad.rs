//! Fixed-order Gauss–Legendre rules and geometric grading toward endpoint
//! singularities.

const GL10: [(f64, f64); 5] = [
    (0.14887433898163122, 0.295524224714753),
    (0.4333953941292472, 0.2692667193099965),
    (0.6794095682990244, 0.219086362515982),
    (0.8650633666889845, 0.14945134915058036),
    (0.9739065285171717, 0.06667134430868807),
];

/// Geometric levels (ratio 1/2) used toward a singular endpoint.
pub(crate) const GRADING_LEVELS: usize = 40;

/// 10-point Gauss–Legendre on `[a, b]`.
pub(crate) fn gauss10(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in GL10.iter().rev() {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}

/// Nodes and weights of [`gauss10`] on `[a, b]`.
pub(crate) fn gauss10_points(a: f64, b: f64) -> [(f64, f64); 10] {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 10];
    for (i, &(x, w)) in GL10.iter().enumerate() {
        out[4 - i] = (mid - half * x, half * w);
        out[5 + i] = (mid + half * x, half * w);
    }
    out
}

/// `∫_s^e f` with pieces `[s + (e-s)/2^{k+1}, s + (e-s)/2^k]`, `k < levels`,
/// each integrated by [`gauss10`]. The innermost piece `[s, s + (e-s)/2^levels]`
/// is delegated to `tail`, which receives that piece's far end. `e < s` is allowed.
pub(crate) fn graded_toward(f: &impl Fn(f64) -> f64, s: f64, e: f64, levels: usize, tail: impl Fn(f64) -> f64) -> f64 {
    let span = e - s;
    let mut scale = 1.0;
    for _ in 0..levels {
        scale *= 0.5;
    }
    let inner = s + span * scale;
    // accumulate from the singular end outward so small pieces are not swamped
    let mut acc = tail(inner);
    let mut lo_scale = scale;
    for _ in 0..levels {
        let hi_scale = lo_scale * 2.0;
        let a = s + span * lo_scale;
        let b = s + span * hi_scale;
        acc += gauss10(f, a, b);
        lo_scale = hi_scale;
    }
    acc
}
