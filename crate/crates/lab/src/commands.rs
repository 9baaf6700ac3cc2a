//! One function per subcommand. Each parses its config, runs the wrapped
//! operation and returns the files to write.

use std::fs;
use std::path::{Path, PathBuf};

use morrey_core::hilbert::{necessity_functional, opnorm_sweep, ShrinkingFamily, SweepPoint};
use morrey_core::morrey::{char_norm_weighted, exponent_fit, morrey_norm_step};
use morrey_core::muckenhoupt::{admissible, ap_constant, apl_constant};
use morrey_core::{BallFamily, Error, FunctionalReport, MorreyParams, Weight};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{parse, BallSpec, Config, Count, FamilySpec, Num, StepSpec};
use crate::crosscheck::{self, CrossCheck};
use crate::output::{csv_string, sweep_svg, to_json};
use crate::{LabError, VERSION};

/// Subcommands of `morrey-lab`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Morrey norm of an indicator or a step function.
    Norm,
    /// Operator-norm lower bounds of the Hilbert transform over a grid of power exponents.
    Sweep,
    /// Admissibility check on a probe ball.
    Admissible,
    /// Classical Muckenhoupt constant.
    Apconst,
    /// Morrey-type Muckenhoupt constant.
    Aplconst,
    /// Necessity functional against a hypothesized operator-norm bound.
    Necessity,
    /// Scaling exponent of indicator norms for a power weight.
    Expfit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Sweep => "sweep",
            Command::Admissible => "admissible",
            Command::Apconst => "apconst",
            Command::Aplconst => "aplconst",
            Command::Necessity => "necessity",
            Command::Expfit => "expfit",
        }
    }
}

/// Rendered outputs of one command, before anything touches the disk.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub json: String,
    pub csv: Option<String>,
    pub svg: Option<String>,
    /// Set when the result diverges where the experiment expected boundedness.
    pub divergence: Option<String>,
    /// Weight and window for the seeded mass cross-check.
    pub check: Option<(Weight, (f64, f64))>,
}

/// Files written by [`run`] and the divergence verdict.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub divergence: Option<String>,
    pub crosscheck: Option<CrossCheck>,
}

/// Parses `text` and evaluates `cmd` without writing anything.
pub fn evaluate(cmd: Command, text: &str, source: &str) -> Result<Artifacts, LabError> {
    match cmd {
        Command::Norm => norm(parse(text, source)?),
        Command::Sweep => sweep(parse(text, source)?),
        Command::Admissible => admissibility(parse(text, source)?),
        Command::Apconst => apconst(parse(text, source)?),
        Command::Aplconst => aplconst(parse(text, source)?),
        Command::Necessity => necessity(parse(text, source)?),
        Command::Expfit => expfit(parse(text, source)?),
    }
}

/// Evaluates `cmd` and writes `<command>.json` (and `.csv`/`.svg`) into `out`.
/// With a seed, also runs the mass cross-check; its result never reaches the files.
pub fn run(cmd: Command, text: &str, source: &str, out: &Path, seed: Option<u64>) -> Result<Outcome, LabError> {
    let art = evaluate(cmd, text, source)?;
    fs::create_dir_all(out).map_err(|e| LabError::io(out, e))?;
    let mut files = Vec::new();
    for (ext, body) in [("json", Some(&art.json)), ("csv", art.csv.as_ref()), ("svg", art.svg.as_ref())] {
        if let Some(body) = body {
            let path = out.join(format!("{}.{ext}", cmd.name()));
            fs::write(&path, body).map_err(|e| LabError::io(&path, e))?;
            files.push(path);
        }
    }
    let crosscheck = seed.zip(art.check).map(|(s, (w, win))| crosscheck::weight_mass(&w, win, s));
    Ok(Outcome { files, divergence: art.divergence, crosscheck })
}

fn window(fam: &BallFamily) -> (f64, f64) {
    (fam.center_lo(), fam.center_hi())
}

fn yes() -> bool {
    true
}

fn report(cmd: Command, config: Value, result: impl Serialize) -> Result<String, LabError> {
    to_json(&json!({ "tool": VERSION, "command": cmd.name(), "config": config, "result": result }))
}

fn resolved<E>(cfg: &Config<E>, family: Option<&BallFamily>, experiment: Value) -> Value {
    json!({ "params": cfg.params, "weight": cfg.weight, "family": family, "experiment": experiment })
}

fn op_error(cmd: Command, e: Error) -> LabError {
    LabError::invalid(cmd.name(), e)
}

fn reject_section(present: bool, section: &str, why: &str) -> Result<(), LabError> {
    if present {
        return Err(LabError::Validation(format!("{section}: {why}")));
    }
    Ok(())
}

fn unbounded(what: &str, rep: &FunctionalReport) -> Option<String> {
    (!rep.is_bounded()).then(|| format!("{what} diverges (cause: {:?})", rep.cause))
}

fn trace_csv(rep: &FunctionalReport) -> Result<String, LabError> {
    csv_string(
        &["stage", "value"],
        rep.refine_trace.iter().enumerate().map(|(i, v)| vec![i.to_string(), v.to_string()]),
    )
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Target {
    Ball {
        center: Num,
        radius: Num,
    },
    Step {
        #[serde(flatten)]
        step: StepSpec,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NormExperiment {
    target: Target,
    #[serde(default)]
    trace_csv: bool,
    #[serde(default = "yes")]
    expect_bounded: bool,
}

fn norm(cfg: Config<NormExperiment>) -> Result<Artifacts, LabError> {
    let params = cfg.params.build()?;
    let w = cfg.weight()?.build(params.n())?;
    let exp = &cfg.experiment;
    let (rep, fam) = match &exp.target {
        Target::Ball { center, radius } => {
            let b0 = BallSpec { center: *center, radius: *radius }.build("experiment.target")?;
            let fam = cfg.family_overrides().resolve(BallFamily::unit_template().rescaled(&b0), "family")?;
            (char_norm_weighted(&params, &w, &b0, &fam), fam)
        }
        Target::Step { step } => {
            let f = step.build("experiment.target")?;
            let (lo, hi) = f
                .support()
                .ok_or_else(|| LabError::Validation("experiment.target: step function vanishes identically".into()))?;
            let base = BallFamily::covering(lo, hi).map_err(|e| LabError::invalid("experiment.target", e))?;
            let fam = cfg.family_overrides().resolve(base, "family")?;
            (morrey_norm_step(&params, &w, &f, &fam), fam)
        }
    };
    let rep = rep.map_err(|e| op_error(Command::Norm, e))?;
    let config = resolved(&cfg, Some(&fam), serde_json::to_value(exp).expect("plain data"));
    Ok(Artifacts {
        json: report(Command::Norm, config, &rep)?,
        csv: if exp.trace_csv { Some(trace_csv(&rep)?) } else { None },
        svg: None,
        divergence: if exp.expect_bounded { unbounded("norm", &rep) } else { None },
        check: Some((w, window(&fam))),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum NuGrid {
    List(Vec<Num>),
    Range { start: Num, stop: Num, step: Num },
}

impl NuGrid {
    fn values(&self) -> Result<Vec<f64>, LabError> {
        let nus = match self {
            NuGrid::List(v) => v.iter().map(|n| n.0).collect(),
            NuGrid::Range { start, stop, step } => {
                if !(step.0 > 0.0) {
                    return Err(LabError::Validation("experiment.nu.step: must be positive".into()));
                }
                let span = (stop.0 - start.0) / step.0;
                if span < -1e-9 {
                    Vec::new()
                } else {
                    // snap to 12 decimals so 0.1 steps print as written
                    let count = (span + 1e-9).floor() as usize + 1;
                    (0..count).map(|i| ((start.0 + i as f64 * step.0) * 1e12).round() / 1e12).collect()
                }
            }
        };
        if nus.is_empty() {
            return Err(LabError::Validation("experiment.nu: empty exponent grid".into()));
        }
        Ok(nus)
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShrinkingSpec {
    center: Option<Num>,
    length: Option<Num>,
    scale_start: Option<Num>,
    scale_ratio: Option<Num>,
    steps: Option<Count>,
    resolution: Option<Count>,
}

impl ShrinkingSpec {
    fn resolve(&self) -> ShrinkingFamily {
        let d = ShrinkingFamily::default();
        let f = |x: Option<Num>, d: f64| x.map_or(d, |n| n.0);
        let c = |x: Option<Count>, d: usize| x.map_or(d, |n| n.0);
        ShrinkingFamily {
            center: f(self.center, d.center),
            length: f(self.length, d.length),
            scale_start: f(self.scale_start, d.scale_start),
            scale_ratio: f(self.scale_ratio, d.scale_ratio),
            steps: c(self.steps, d.steps),
            resolution: c(self.resolution, d.resolution),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepExperiment {
    nu: NuGrid,
    #[serde(default)]
    shrinking: ShrinkingSpec,
}

/// `(λ - 1, λ + p - 1)`: power exponents for which the transform is bounded.
fn bounded_interval(params: &MorreyParams) -> (f64, f64) {
    (params.lambda() - 1.0, params.lambda() + (params.p() - 1.0))
}

fn sweep(cfg: Config<SweepExperiment>) -> Result<Artifacts, LabError> {
    reject_section(
        cfg.weight.is_some(),
        "weight",
        "sweep uses |x - center|^nu; set experiment.nu and experiment.shrinking.center",
    )?;
    reject_section(cfg.family.is_some(), "family", "sweep derives its ball families from experiment.shrinking")?;
    let params = cfg.params.build()?;
    let nus = cfg.experiment.nu.values()?;
    let family = cfg.experiment.shrinking.resolve();
    let points = opnorm_sweep(&params, &nus, &family).map_err(|e| op_error(Command::Sweep, e))?;

    let (lo, hi) = bounded_interval(&params);
    let inside: Vec<String> =
        points.iter().filter(|s| s.diverging && lo < s.nu && s.nu < hi).map(|s| s.nu.to_string()).collect();
    let divergence =
        (!inside.is_empty()).then(|| format!("sweep diverges inside ({lo}, {hi}) at nu = {}", inside.join(", ")));

    let mid = Weight::power(family.center, nus[nus.len() / 2]);
    let check = mid.validate(1).is_ok().then_some((mid, (family.center - 2.0, family.center + 2.0)));
    let experiment = json!({ "nu": cfg.experiment.nu, "shrinking": family });
    let config = resolved(&cfg, None, experiment);
    let result = json!({
        "nus": nus,
        "bounded_interval": [lo, hi],
        "gaps": (0..family.steps).map(|k| family.gap(k)).collect::<Vec<_>>(),
        "points": points,
    });
    Ok(Artifacts {
        json: report(Command::Sweep, config, result)?,
        csv: Some(sweep_csv(&points, family.steps)?),
        svg: Some(sweep_svg(&points, family.steps, (lo, hi))),
        divergence,
        check,
    })
}

fn sweep_csv(points: &[SweepPoint], steps: usize) -> Result<String, LabError> {
    let rows = points.iter().flat_map(|s| {
        (0..steps).map(move |k| {
            let lb = s.bounds.get(k).map_or(String::new(), |v| v.to_string());
            vec![s.nu.to_string(), k.to_string(), lb, s.diverging.to_string()]
        })
    });
    csv_string(&["nu", "family_step", "opnorm_lb", "diverging"], rows)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AdmissibleExperiment {
    probe: BallSpec,
    #[serde(default)]
    expect_bounded: bool,
}

fn admissibility(cfg: Config<AdmissibleExperiment>) -> Result<Artifacts, LabError> {
    let params = cfg.params.build()?;
    let w = cfg.weight()?.build(params.n())?;
    let probe = cfg.experiment.probe.build("experiment.probe")?;
    let fam = cfg.family_overrides().resolve(BallFamily::unit_template().rescaled(&probe), "family")?;
    let adm = admissible(&params, &w, &probe, &fam).map_err(|e| op_error(Command::Admissible, e))?;
    let divergence = (cfg.experiment.expect_bounded && !adm.admissible)
        .then(|| "weight is not admissible on the probe ball".to_string());
    let config = resolved(&cfg, Some(&fam), serde_json::to_value(&cfg.experiment).expect("plain data"));
    Ok(Artifacts {
        json: report(Command::Admissible, config, &adm)?,
        csv: None,
        svg: None,
        divergence,
        check: Some((w, window(&fam))),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApExperiment {
    #[serde(default = "yes")]
    expect_bounded: bool,
}

fn apconst(cfg: Config<ApExperiment>) -> Result<Artifacts, LabError> {
    let params = cfg.params.build()?;
    let w = cfg.weight()?.build(params.n())?;
    let base = BallFamily::new(-1.0, 1.0, 65, 1e-4, 1.0, 32).expect("static family");
    let fam = cfg.family_overrides().resolve(base, "family")?;
    let rep = ap_constant(params.p(), &w, &fam).map_err(|e| op_error(Command::Apconst, e))?;
    let config = resolved(&cfg, Some(&fam), serde_json::to_value(&cfg.experiment).expect("plain data"));
    Ok(Artifacts {
        json: report(Command::Apconst, config, &rep)?,
        csv: Some(trace_csv(&rep)?),
        svg: None,
        divergence: if cfg.experiment.expect_bounded { unbounded("A_p constant", &rep) } else { None },
        check: Some((w, window(&fam))),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AplExperiment {
    #[serde(default)]
    inner: FamilySpec,
    #[serde(default = "yes")]
    expect_bounded: bool,
}

fn outer_default() -> BallFamily {
    BallFamily::new(-1.0, 1.0, 17, 1e-3, 1.0, 12).expect("static family").with_refine_rounds(1)
}

fn aplconst(cfg: Config<AplExperiment>) -> Result<Artifacts, LabError> {
    let params = cfg.params.build()?;
    let w = cfg.weight()?.build(params.n())?;
    let outer = cfg.family_overrides().resolve(outer_default(), "family")?;
    let inner = cfg.experiment.inner.resolve(BallFamily::coarse_template(), "experiment.inner")?;
    let rep = apl_constant(&params, &w, &outer, &inner).map_err(|e| op_error(Command::Aplconst, e))?;
    let experiment = json!({ "inner": inner, "expect_bounded": cfg.experiment.expect_bounded });
    let config = resolved(&cfg, Some(&outer), experiment);
    Ok(Artifacts {
        json: report(Command::Aplconst, config, &rep)?,
        csv: Some(trace_csv(&rep)?),
        svg: None,
        divergence: if cfg.experiment.expect_bounded { unbounded("A_{p,lambda} constant", &rep) } else { None },
        check: Some((w, window(&outer))),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NecessityExperiment {
    k: Num,
    #[serde(default)]
    inner: FamilySpec,
    #[serde(default)]
    expect_bounded: bool,
}

fn necessity(cfg: Config<NecessityExperiment>) -> Result<Artifacts, LabError> {
    let params = cfg.params.build()?;
    let w = cfg.weight()?.build(params.n())?;
    let base = BallFamily::new(-1.0, 1.0, 17, 1e-3, 0.5, 12).expect("static family").with_refine_rounds(1);
    let fam = cfg.family_overrides().resolve(base, "family")?;
    let inner = cfg.experiment.inner.resolve(BallFamily::coarse_template(), "experiment.inner")?;
    let rep = necessity_functional(&params, &w, &fam, &inner, cfg.experiment.k.0)
        .map_err(|e| op_error(Command::Necessity, e))?;
    let experiment = json!({ "k": cfg.experiment.k, "inner": inner, "expect_bounded": cfg.experiment.expect_bounded });
    let config = resolved(&cfg, Some(&fam), experiment);
    let divergence = if cfg.experiment.expect_bounded && !rep.satisfied {
        Some(format!("necessity functional exceeds 2k = {}", rep.bound_2k))
    } else {
        None
    };
    Ok(Artifacts {
        json: report(Command::Necessity, config, &rep)?,
        csv: None,
        svg: None,
        divergence,
        check: Some((w, window(&fam))),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Radii {
    min: Num,
    max: Num,
    count: Count,
}

impl Default for Radii {
    fn default() -> Self {
        Radii { min: Num(1e-2), max: Num(1.0), count: Count(9) }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpfitExperiment {
    #[serde(default)]
    radii: Radii,
}

fn expfit(cfg: Config<ExpfitExperiment>) -> Result<Artifacts, LabError> {
    let params = cfg.params.build()?;
    let spec = cfg.weight()?;
    spec.build(params.n())?;
    let w = spec.as_power().ok_or_else(|| LabError::Validation("weight: expfit needs a power weight".into()))?;
    let Radii { min, max, count } = cfg.experiment.radii;
    if !(min.0 > 0.0 && max.0 > min.0 && count.0 >= 2) {
        return Err(LabError::Validation("experiment.radii: need 0 < min < max and count >= 2".into()));
    }
    let radii: Vec<f64> =
        (0..count.0).map(|i| (min.0.ln() + (max.0 / min.0).ln() * i as f64 / (count.0 - 1) as f64).exp()).collect();
    let template = cfg.family_overrides().resolve(BallFamily::unit_template(), "family")?;
    let config = resolved(&cfg, Some(&template), serde_json::to_value(&cfg.experiment).expect("plain data"));
    let fit = match exponent_fit(&params, &w, &radii, &template) {
        Ok(fit) => fit,
        Err(e @ Error::Inadmissible { .. }) => {
            let json = report(Command::Expfit, config, json!({ "error": e }))?;
            return Ok(Artifacts { json, csv: None, svg: None, divergence: Some(format!("expfit: {e}")), check: None });
        }
        Err(e) => return Err(op_error(Command::Expfit, e)),
    };
    let rows = radii.iter().zip(&fit.points).map(|(r, (x, y))| vec![r.to_string(), x.to_string(), y.to_string()]);
    Ok(Artifacts {
        csv: Some(csv_string(&["radius", "log_measure", "log_norm"], rows)?),
        json: report(Command::Expfit, config, &fit)?,
        svg: None,
        divergence: None,
        check: Some((Weight::Power(w), (w.center - max.0, w.center + max.0))),
    })
}
