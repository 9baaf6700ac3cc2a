//! Grid search for sup-type functionals over a [`BallFamily`].

use alloc::vec::Vec;

use crate::error::Result;
use crate::fmath::{exp, linspace, ln, logspace, powf};
use crate::geometry::{Ball, BallFamily, ZOOM};
use crate::report::{DivergenceCause, FunctionalReport};

/// A functional evaluated on one candidate ball.
pub trait BallEval: Sync {
    /// Value on `ball`; errors count as failed candidates.
    fn eval(&self, ball: &Ball) -> Result<f64>;
}

impl<F> BallEval for F
where
    F: Fn(&Ball) -> Result<f64> + Sync,
{
    fn eval(&self, ball: &Ball) -> Result<f64> {
        self(ball)
    }
}

struct Best {
    value: f64,
    ball: Option<Ball>,
    failed: usize,
}

impl Best {
    fn offer(&mut self, ball: Ball, outcome: Result<f64>) {
        match outcome {
            Ok(v) if v.is_finite() => {
                let better = match self.ball {
                    None => true,
                    Some(b) => v > self.value || (v == self.value && ball.lex_less(&b)),
                };
                if better {
                    self.value = v;
                    self.ball = Some(ball);
                }
            }
            _ => self.failed += 1,
        }
    }
}

fn evaluate(eval: &impl BallEval, centers: &[f64], radii: &[f64], best: &mut Best) {
    let balls: Vec<Ball> =
        centers.iter().flat_map(|&c| radii.iter().map(move |&r| Ball { center: c, radius: r })).collect();

    let outcomes = par_map(&balls, |b| eval.eval(b));

    // serial reduction in candidate order keeps the result thread-count independent
    for (ball, outcome) in balls.into_iter().zip(outcomes) {
        best.offer(ball, outcome);
    }
}

/// Order-preserving map, run on the rayon pool with the `parallel` feature.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

fn with_anchors(mut centers: Vec<f64>, anchors: &[f64]) -> Vec<f64> {
    centers.extend(anchors.iter().copied().filter(|a| a.is_finite()));
    centers.sort_by(f64::total_cmp);
    centers.dedup();
    centers
}

/// Maximizes `eval` over `fam`, with extra candidate centers at `anchors`
/// (weight singularities, jumps of the target function).
///
/// The trace holds the running maximum after the base grid, after each zoom
/// round and after each probe round, so it is non-decreasing.
pub fn search_sup(fam: &BallFamily, anchors: &[f64], eval: &impl BallEval) -> FunctionalReport {
    let mut best = Best { value: 0.0, ball: None, failed: 0 };
    let mut trace = Vec::with_capacity(1 + fam.refine_rounds() + fam.probe_rounds());

    let r_min = fam.radius_min();
    let r_max = fam.effective_radius_max();
    evaluate(eval, &with_anchors(fam.centers(), anchors), &fam.radii(), &mut best);
    trace.push(best.value);

    let mut width = fam.center_hi() - fam.center_lo();
    let mut log_width = ln(r_max) - ln(r_min);
    for _ in 0..fam.refine_rounds() {
        let Some(arg) = best.ball else { break };
        width = (width / ZOOM).min(8.0 * arg.radius);
        log_width /= ZOOM;
        let centers = linspace(arg.center - 0.5 * width, arg.center + 0.5 * width, fam.center_count());
        let log_mid = ln(arg.radius);
        let lo = exp((log_mid - 0.5 * log_width).max(ln(r_min))).max(r_min);
        let hi = exp((log_mid + 0.5 * log_width).min(ln(r_max))).min(r_max);
        let mut radii = if hi > lo { logspace(lo, hi, fam.radius_count()) } else { Vec::new() };
        radii.push(arg.radius);
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        evaluate(eval, &with_anchors(centers, &[arg.center]), &radii, &mut best);
        trace.push(best.value);
    }

    for k in 1..=fam.probe_rounds() {
        let hi = r_min * powf(fam.probe_shrink(), -((k - 1) as f64));
        let lo = r_min * powf(fam.probe_shrink(), -(k as f64));
        let radii = logspace(lo, hi, fam.radius_count());
        let local = match best.ball {
            Some(arg) => linspace(arg.center - 4.0 * hi, arg.center + 4.0 * hi, fam.center_count()),
            None => Vec::new(),
        };
        evaluate(eval, &with_anchors(local, anchors), &radii, &mut best);
        trace.push(best.value);
    }

    let mut report = FunctionalReport {
        value: best.value,
        argmax: best.ball.unwrap_or(Ball { center: fam.center_lo(), radius: r_min }),
        family: fam.clone(),
        refine_trace: trace,
        diverging: false,
        cause: None,
        failed_balls: best.failed,
    };
    if best.failed > 0 {
        report = report.flag(DivergenceCause::NonIntegrable);
    } else if growth_detected(&report.refine_trace, fam.probe_rounds(), fam.divergence_ratio()) {
        report = report.flag(DivergenceCause::Growth);
    }
    report
}

fn growth_detected(trace: &[f64], probes: usize, ratio: f64) -> bool {
    if probes < 2 || trace.len() < 3 {
        return false;
    }
    let n = trace.len();
    let (t0, t1, t2) = (trace[n - 3], trace[n - 2], trace[n - 1]);
    t0 > 0.0 && t1 >= ratio * t0 && t2 >= ratio * t1
}
