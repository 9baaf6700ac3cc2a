//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one `PASS`/`FAIL` line; the process fails if any criterion does.

use std::f64::consts::{LN_2, PI};
use std::fs;
use std::path::Path;
use std::process::{Command, Stdio};

use morrey_core::hilbert::{
    adjacent_bound, adjacent_norm_ratio, hilbert_step, necessity_functional, opnorm_sweep, AdjacentPair,
    ShrinkingFamily, Side,
};
use morrey_core::morrey::{char_norm_unweighted, char_norm_weighted, exponent_fit};
use morrey_core::muckenhoupt::{admissible, ap_functional, apl_functional};
use morrey_core::{Ball, BallFamily, Interval, MorreyParams, PowerWeight, StepFunction, Weight};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

const CLOSED_FORM_REL: f64 = 0.02;
const CLOSED_FORM_OVERSHOOT: f64 = 1e-8;
const SLOPE_TOL: f64 = 0.02;
const HILBERT_ABS: f64 = 1e-6;
const SHARP_BOUND_ABS: f64 = 1e-9;
const REDUCTION_REL: f64 = 1e-6;
const BOUNDED_SPREAD: f64 = 3.0;
const DIVERGING_GROWTH: f64 = 10.0;
const FAR_PAIR_REL: f64 = 0.05;

struct Verdict {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn verdict(name: &'static str, ok: bool, detail: String) -> Verdict {
    Verdict { name, ok, detail }
}

fn line(p: f64, lambda: f64) -> MorreyParams {
    MorreyParams::line(p, lambda).unwrap()
}

fn criterion_1_closed_form_oracle() -> Verdict {
    let b0 = Ball::new(0.0, 1.0).unwrap();
    let fam = BallFamily::unit_template().rescaled(&b0);
    let (mut worst_rel, mut worst_over) = (0.0f64, f64::NEG_INFINITY);
    for p in [1.0, 2.0, 4.0] {
        for lambda in [0.0, 0.3, 0.7] {
            let params = line(p, lambda);
            let exact = 2f64.powf((1.0 - lambda) / p);
            worst_rel = worst_rel.max((char_norm_unweighted(&params, 1.0) / exact - 1.0).abs());
            let est = char_norm_weighted(&params, &Weight::Unit, &b0, &fam).unwrap().value;
            worst_rel = worst_rel.max((est - exact).abs() / exact);
            worst_over = worst_over.max(est - exact);
        }
    }
    verdict(
        "closed form",
        worst_rel <= CLOSED_FORM_REL && worst_over <= CLOSED_FORM_OVERSHOOT,
        format!("max rel err {worst_rel:.2e}, max overshoot {worst_over:.2e}"),
    )
}

fn criterion_2_scaling_exponent() -> Verdict {
    let radii: Vec<f64> = (0..9).map(|i| 10f64.powf(-2.0 + 0.25 * i as f64)).collect();
    let template = BallFamily::unit_template();
    let mut details = Vec::new();
    let mut ok = true;
    for (p, lambda, nu, expected) in [(2.0, 0.4, 0.3, 0.45), (1.0, 0.0, 1.0, 2.0)] {
        let fit = exponent_fit(&line(p, lambda), &PowerWeight::new(0.0, nu), &radii, &template).unwrap();
        ok &= (fit.slope - expected).abs() <= SLOPE_TOL && (fit.theory - expected).abs() < 1e-12;
        details.push(format!("slope {:.5} (theory {})", fit.slope, fit.theory));
    }
    verdict("scaling exponent", ok, details.join(", "))
}

fn criterion_3_admissibility_boundary() -> Verdict {
    let params = line(2.0, 0.3);
    let probe = Ball::new(0.0, 1.0).unwrap();
    let fam = BallFamily::unit_template().rescaled(&probe);
    let mut got = Vec::new();
    for nu in [-0.9, -0.5, 1.1, 1.5] {
        got.push(admissible(&params, &Weight::power(0.0, nu), &probe, &fam).unwrap().admissible);
    }
    let expected = [-0.9, -0.5, 1.1, 1.5].map(|nu: f64| params.lambda() - 1.0 <= nu && nu <= params.lambda() + 1.0);
    verdict("admissibility boundary", got == expected, format!("admissible = {got:?}, analytic = {expected:?}"))
}

/// `∫_a^b dt / (t - x)` for `x` outside `[a, b]`: midpoint rule on pieces no
/// longer than half their distance to `x`.
fn graded_midpoint(a: f64, b: f64, x: f64) -> f64 {
    const NODES: usize = 400;
    let toward = x > b;
    let (mut left, mut right) = (a, b);
    let mut acc = 0.0;
    while right - left > 1e-15 * (b - a) {
        // peel pieces off the end nearest to x
        let dist = if toward { x - right } else { left - x };
        let len = (0.5 * dist).min(right - left);
        let (pa, pb) = if toward { (right - len, right) } else { (left, left + len) };
        let h = len / NODES as f64;
        acc += (0..NODES).map(|i| h / (pa + h * (i as f64 + 0.5) - x)).sum::<f64>();
        if toward {
            right = pa;
        } else {
            left = pb;
        }
    }
    acc
}

fn pv_oracle(f: &StepFunction, x: f64) -> f64 {
    f.cells()
        .map(|(lo, hi, v)| {
            let integral = if lo < x && x < hi {
                // the symmetric part around x cancels exactly
                let d = (x - lo).min(hi - x);
                let (a, b) = if x - lo > hi - x { (lo, x - d) } else { (x + d, hi) };
                if b > a {
                    graded_midpoint(a, b, x)
                } else {
                    0.0
                }
            } else {
                graded_midpoint(lo, hi, x)
            };
            v * integral
        })
        .sum::<f64>()
        / PI
}

fn criterion_4_hilbert_exactness() -> Verdict {
    let mut rng = StdRng::seed_from_u64(20241019);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let m = rng.random_range(2..9usize);
        let mut b: Vec<f64> = (0..m).map(|_| rng.random_range(-5.0..5.0)).collect();
        b.sort_by(f64::total_cmp);
        b.dedup_by(|x, y| (*x - *y).abs() < 0.05);
        if b.len() < 2 {
            b = vec![-1.0, 1.0];
        }
        let vals: Vec<f64> = (1..b.len()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let f = StepFunction::new(b.clone(), vals).unwrap();
        let mut taken = 0;
        while taken < 100 {
            let x = rng.random_range(-8.0..8.0);
            if b.iter().any(|c| (x - c).abs() < 0.01) {
                continue;
            }
            taken += 1;
            worst = worst.max((hilbert_step(&f, x).unwrap() - pv_oracle(&f, x)).abs());
        }
    }
    verdict("Hilbert exactness", worst <= HILBERT_ABS, format!("max |diff| {worst:.2e} over 1000 points"))
}

fn criterion_5_adjacent_interval_bound() -> Verdict {
    let sharp = LN_2 / PI;
    let mut worst = 0.0f64;
    let mut ok = true;
    for len in [0.01, 0.1, 1.0] {
        for side in [Side::Left, Side::Right] {
            let pair = AdjacentPair::beside(Interval::new(0.3, 0.3 + len), side).unwrap();
            let m = adjacent_bound(&pair, 1000);
            worst = worst.max((m - sharp).abs());
            ok &= PI * m > 0.5;
        }
    }
    ok &= worst <= SHARP_BOUND_ABS;
    verdict("adjacent-interval bound", ok, format!("max |min - ln2/pi| {worst:.2e}; pi * min = {:.6}", PI * sharp))
}

fn criterion_6_lambda_zero_reduction() -> Verdict {
    let mut rng = StdRng::seed_from_u64(6);
    let params = line(2.0, 0.0);
    let inner = BallFamily::coarse_template();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let ball = Ball::new(rng.random_range(-3.0..3.0), rng.random_range(0.01..2.0)).unwrap();
        for w in [Weight::Unit, Weight::power(0.0, 0.5)] {
            let apl = apl_functional(&params, &w, &ball, &inner).unwrap();
            let ap = ap_functional(params.p(), &w, &ball).unwrap().powf(1.0 / params.p());
            worst = worst.max((apl / ap - 1.0).abs());
        }
    }
    verdict("lambda = 0 reduction", worst <= REDUCTION_REL, format!("max rel diff {worst:.2e} on 20 balls x 2 weights"))
}

fn criterion_7_necessity_sweep() -> Verdict {
    let params = line(2.0, 0.3);
    let family = ShrinkingFamily::default();
    let nus = [-0.9, -0.5, 0.0, 0.5, 1.0, 1.5];
    let points = opnorm_sweep(&params, &nus, &family).unwrap();
    let interval_fam = BallFamily::new(-1.0, 1.0, 17, 1e-3, 0.5, 12).unwrap().with_refine_rounds(1);
    let inner = BallFamily::coarse_template();

    let mut ok = true;
    let mut details = Vec::new();
    for s in &points {
        let outside = s.nu <= params.lambda() - 1.0 || s.nu >= params.lambda() + 1.0;
        let spread =
            s.bounds.iter().cloned().fold(0.0, f64::max) / s.bounds.iter().cloned().fold(f64::INFINITY, f64::min);
        let nec = necessity_functional(&params, &Weight::power(0.0, s.nu), &interval_fam, &inner, 1.0).unwrap();
        if outside {
            ok &= s.growth >= DIVERGING_GROWTH && s.diverging;
        } else {
            ok &= spread <= BOUNDED_SPREAD && !s.diverging;
        }
        ok &= nec.functional_value.diverging == outside;
        details.push(format!(
            "nu={}: growth {:.2}, spread {:.2}, necessity diverging {}",
            s.nu, s.growth, spread, nec.functional_value.diverging
        ));
    }

    let control = [-0.9, -0.5, 0.0, 0.5, 0.9, 1.2, 1.5];
    let flagged: Vec<f64> = opnorm_sweep(&line(2.0, 0.0), &control, &family)
        .unwrap()
        .iter()
        .filter(|s| s.diverging)
        .map(|s| s.nu)
        .collect();
    ok &= flagged == [1.2, 1.5];
    details.push(format!("lambda=0 control flags {flagged:?}"));
    verdict("necessity sweep", ok, details.join("; "))
}

fn criterion_8_adjacent_norm_ratio() -> Verdict {
    let params = line(2.0, 0.3);
    let observed = opnorm_sweep(&params, &[0.3], &ShrinkingFamily::default()).unwrap()[0]
        .bounds
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    let k = observed.max(1.0);
    let w = Weight::power(0.0, 0.3);
    let t = BallFamily::unit_template();
    let straddle = AdjacentPair::beside(Interval::new(-0.25, 0.25), Side::Right).unwrap();
    let near = adjacent_norm_ratio(&params, &w, &straddle, &t, k).unwrap();
    let mut ok = near.within && near.ratio >= 1.0 / (2.0 * k) && near.ratio <= 2.0 * k;
    let mut far_dev = 0.0f64;
    for (lo, side) in [(20.0, Side::Right), (-20.5, Side::Left), (200.0, Side::Left)] {
        let pair = AdjacentPair::beside(Interval::new(lo, lo + 0.5), side).unwrap();
        far_dev = far_dev.max((adjacent_norm_ratio(&params, &w, &pair, &t, k).unwrap().ratio - 1.0).abs());
    }
    ok &= far_dev <= FAR_PAIR_REL;
    verdict(
        "adjacent norm ratio",
        ok,
        format!(
            "observed bound {observed:.4}, k = {k:.4}, straddling ratio {:.4}, far pairs max |ratio - 1| {far_dev:.2e}",
            near.ratio
        ),
    )
}

const CONFIGS: [(&str, &str); 7] = [
    (
        "norm",
        r#"{"params": {"p": 2, "lambda": "0.5"}, "weight": {"kind": "power", "exponent": "0.4"},
            "experiment": {"target": {"kind": "step", "breakpoints": [-1, 0.5, 1], "values": [1, -2]}, "trace_csv": true}}"#,
    ),
    (
        "sweep",
        r#"{"params": {"p": 2, "lambda": "0.3"},
            "experiment": {"nu": ["-0.9", "0.3", "1.5"], "shrinking": {"steps": 3, "resolution": 16}}}"#,
    ),
    (
        "admissible",
        r#"{"params": {"p": 2, "lambda": "0.3"}, "weight": {"kind": "power", "exponent": "1.1"},
            "experiment": {"probe": {"center": 0, "radius": 1}}}"#,
    ),
    (
        "apconst",
        r#"{"params": {"p": 2, "lambda": 0}, "weight": {"kind": "power", "exponent": "0.5"}, "experiment": {}}"#,
    ),
    (
        "aplconst",
        r#"{"params": {"p": 2, "lambda": "0.3"}, "weight": {"kind": "power", "exponent": "0.5"}, "experiment": {}}"#,
    ),
    (
        "necessity",
        r#"{"params": {"p": 2, "lambda": "0.3"}, "weight": {"kind": "power", "exponent": "0.5"}, "experiment": {"k": 5}}"#,
    ),
    (
        "expfit",
        r#"{"params": {"p": 2, "lambda": "0.4"}, "weight": {"kind": "power", "exponent": "0.3"}, "experiment": {}}"#,
    ),
];

fn run_cli(cmd: &str, config: &Path, out: &Path, threads: usize) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_morrey-lab"))
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--threads", &threads.to_string()])
        .stderr(Stdio::null())
        .status()
        .unwrap()
        .code()
        .unwrap()
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_9_determinism() -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let mut ok = true;
    let mut compared = 0;
    for (cmd, text) in CONFIGS {
        let config = tmp.path().join(format!("{cmd}.json"));
        fs::write(&config, text).unwrap();
        let runs: Vec<_> = [1, 8, 1]
            .iter()
            .enumerate()
            .map(|(i, &threads)| {
                let out = tmp.path().join(format!("{cmd}-{i}"));
                let code = run_cli(cmd, &config, &out, threads);
                (code, outputs(&out))
            })
            .collect();
        ok &= runs[0].0 == 0 && !runs[0].1.is_empty();
        ok &= runs.iter().all(|r| *r == runs[0]);
        compared += runs[0].1.len();
    }
    verdict("determinism", ok, format!("{compared} output files identical across --threads 1, 8 and a rerun"))
}

fn main() {
    let criteria: [fn() -> Verdict; 9] = [
        criterion_1_closed_form_oracle,
        criterion_2_scaling_exponent,
        criterion_3_admissibility_boundary,
        criterion_4_hilbert_exactness,
        criterion_5_adjacent_interval_bound,
        criterion_6_lambda_zero_reduction,
        criterion_7_necessity_sweep,
        criterion_8_adjacent_norm_ratio,
        criterion_9_determinism,
    ];
    let mut failed = 0;
    for (i, criterion) in criteria.iter().enumerate() {
        let v = std::panic::catch_unwind(criterion).unwrap_or_else(|_| Verdict {
            name: "panicked",
            ok: false,
            detail: String::new(),
        });
        println!("criterion {} ({}): {} {}", i + 1, v.name, if v.ok { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.ok);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
