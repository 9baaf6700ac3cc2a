//! Experiment configuration: one JSON file with `params`, `weight`, `family`
//! and `experiment` sections. Every numeric field takes either a JSON number
//! or a decimal string such as `"0.3"`.

use std::fmt;

use morrey_core::{Ball, BallFamily, MorreyParams, PowerWeight, StepFunction, Tabulated, Weight};
use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::LabError;

/// A real number read from a JSON number or a decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

/// A count read from a JSON integer or an integer string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Count(pub usize);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.0 as u64)
    }
}

struct NumVisitor;

impl Visitor<'_> for NumVisitor {
    type Value = Num;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a finite number or decimal string")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
        Ok(Num(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
        Ok(Num(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
        Ok(Num(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
        match v.trim().parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Num(x)),
            _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(NumVisitor)
    }
}

struct CountVisitor;

impl Visitor<'_> for CountVisitor {
    type Value = Count;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a non-negative integer or integer string")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Count, E> {
        usize::try_from(v).map(Count).map_err(|_| E::invalid_value(de::Unexpected::Unsigned(v), &self))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Count, E> {
        usize::try_from(v).map(Count).map_err(|_| E::invalid_value(de::Unexpected::Signed(v), &self))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Count, E> {
        v.trim().parse::<usize>().map(Count).map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(CountVisitor)
    }
}

fn one() -> Count {
    Count(1)
}

/// `(p, λ, n)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub p: Num,
    pub lambda: Num,
    #[serde(default = "one")]
    pub n: Count,
}

impl ParamsSpec {
    pub fn build(&self) -> Result<MorreyParams, LabError> {
        MorreyParams::new(self.p.0, self.lambda.0, self.n.0 as u32).map_err(|e| LabError::invalid("params", e))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Unit,
    Power {
        #[serde(default = "zero")]
        center: Num,
        exponent: Num,
    },
    Tabulated {
        xs: Vec<Num>,
        ys: Vec<Num>,
    },
    Product {
        factors: Vec<WeightSpec>,
    },
}

fn zero() -> Num {
    Num(0.0)
}

fn nums(v: &[Num]) -> Vec<f64> {
    v.iter().map(|x| x.0).collect()
}

impl WeightSpec {
    fn to_weight(&self) -> Result<Weight, morrey_core::Error> {
        Ok(match self {
            WeightSpec::Unit => Weight::Unit,
            WeightSpec::Power { center, exponent } => Weight::power(center.0, exponent.0),
            WeightSpec::Tabulated { xs, ys } => Weight::Tabulated(Tabulated::new(nums(xs), nums(ys))?),
            WeightSpec::Product { factors } => {
                Weight::product(factors.iter().map(|f| f.to_weight()).collect::<Result<Vec<_>, _>>()?)
            }
        })
    }

    /// Builds the weight and checks local integrability in dimension `n`.
    pub fn build(&self, n: u32) -> Result<Weight, LabError> {
        let w = self.to_weight().map_err(|e| LabError::invalid("weight", e))?;
        w.validate(n).map_err(|e| LabError::invalid("weight", e))?;
        Ok(w)
    }

    pub fn as_power(&self) -> Option<PowerWeight> {
        match self {
            WeightSpec::Power { center, exponent } => Some(PowerWeight::new(center.0, exponent.0)),
            _ => None,
        }
    }
}

/// Overrides for a ball family; unset fields keep the command's default.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub center_lo: Option<Num>,
    pub center_hi: Option<Num>,
    pub center_count: Option<Count>,
    pub radius_min: Option<Num>,
    pub radius_max: Option<Num>,
    pub radius_count: Option<Count>,
    pub refine_rounds: Option<Count>,
    pub probe_rounds: Option<Count>,
    pub probe_shrink: Option<Num>,
    pub divergence_ratio: Option<Num>,
    pub max_radius_cap: Option<Num>,
}

impl FamilySpec {
    /// Applies the overrides to `base`.
    pub fn resolve(&self, base: BallFamily, section: &'static str) -> Result<BallFamily, LabError> {
        let err = |e| LabError::invalid(section, e);
        let f = |x: Option<Num>, d: f64| x.map_or(d, |n| n.0);
        let c = |x: Option<Count>, d: usize| x.map_or(d, |n| n.0);
        let fam = base
            .clone()
            .with_centers(
                f(self.center_lo, base.center_lo()),
                f(self.center_hi, base.center_hi()),
                c(self.center_count, base.center_count()),
            )
            .map_err(err)?
            .with_radii(
                f(self.radius_min, base.radius_min()),
                f(self.radius_max, base.radius_max()),
                c(self.radius_count, base.radius_count()),
            )
            .map_err(err)?
            .with_refine_rounds(c(self.refine_rounds, base.refine_rounds()))
            .with_probes(
                c(self.probe_rounds, base.probe_rounds()),
                f(self.probe_shrink, base.probe_shrink()),
                f(self.divergence_ratio, base.divergence_ratio()),
            )
            .map_err(err)?;
        let cap = self.max_radius_cap.map(|n| n.0).or(base.max_radius_cap());
        fam.with_radius_cap(cap).map_err(err)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub center: Num,
    pub radius: Num,
}

impl BallSpec {
    pub fn build(&self, section: &'static str) -> Result<Ball, LabError> {
        Ball::new(self.center.0, self.radius.0).map_err(|e| LabError::invalid(section, e))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSpec {
    pub breakpoints: Vec<Num>,
    pub values: Vec<Num>,
}

impl StepSpec {
    pub fn build(&self, section: &'static str) -> Result<StepFunction, LabError> {
        StepFunction::new(nums(&self.breakpoints), nums(&self.values)).map_err(|e| LabError::invalid(section, e))
    }
}

/// A config file as written: the experiment section depends on the command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config<E> {
    pub params: ParamsSpec,
    pub weight: Option<WeightSpec>,
    pub family: Option<FamilySpec>,
    pub experiment: E,
}

impl<E> Config<E> {
    pub fn weight(&self) -> Result<&WeightSpec, LabError> {
        self.weight.as_ref().ok_or_else(|| LabError::Validation("missing field `weight`".into()))
    }

    pub fn family_overrides(&self) -> FamilySpec {
        self.family.clone().unwrap_or_default()
    }
}

/// Parses `text`, reporting the offending field path and position on failure.
pub fn parse<E: DeserializeOwned>(text: &str, source: &str) -> Result<Config<E>, LabError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let cfg = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let at = if path == "." { String::new() } else { format!(" at `{path}`") };
        LabError::Validation(format!("{source}:{}:{}{at}: {inner}", inner.line(), inner.column()))
    })?;
    de.end().map_err(|e| LabError::Validation(format!("{source}:{}:{}: {e}", e.line(), e.column())))?;
    Ok(cfg)
}
