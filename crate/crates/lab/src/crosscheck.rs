//! Seeded spot checks of weight masses against a composite midpoint rule.
//! Results go to stderr only; reports never depend on the seed.

use morrey_core::measure::weight_mass_1d;
use morrey_core::Weight;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

const SAMPLES: usize = 8;
const NODES: usize = 20_000;

/// Largest relative deviation found and how many intervals were checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    pub intervals: usize,
    pub max_rel_diff: f64,
}

fn midpoint(w: &Weight, lo: f64, hi: f64) -> f64 {
    let h = (hi - lo) / NODES as f64;
    (0..NODES).map(|i| w.value(lo + h * (i as f64 + 0.5))).sum::<f64>() * h
}

/// Compares `weight_mass_1d` with the midpoint rule on random subintervals of
/// `window` that keep at least their own length away from singular points.
pub fn weight_mass(w: &Weight, window: (f64, f64), seed: u64) -> CrossCheck {
    let mut rng = StdRng::seed_from_u64(seed);
    let sing = w.singular_points();
    let span = window.1 - window.0;
    let mut out = CrossCheck { intervals: 0, max_rel_diff: 0.0 };
    for _ in 0..1000 {
        if out.intervals == SAMPLES {
            break;
        }
        let len = span * rng.random_range(0.01..0.25);
        let lo = window.0 + rng.random_range(0.0..1.0) * (span - len);
        let hi = lo + len;
        if sing.iter().any(|&a| a > lo - len && a < hi + len) {
            continue;
        }
        let Ok(exact) = weight_mass_1d(w, lo, hi) else { continue };
        let approx = midpoint(w, lo, hi);
        out.max_rel_diff = out.max_rel_diff.max((exact - approx).abs() / exact.abs().max(f64::MIN_POSITIVE));
        out.intervals += 1;
    }
    out
}
