use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath::{abs, powf};
use crate::params::MorreyParams;

/// Power weight `|x - a|^ν` on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PowerWeight {
    /// Singular point `a`.
    pub center: f64,
    /// Exponent `ν`.
    pub exponent: f64,
}

impl PowerWeight {
    /// `|x - a|^ν`.
    pub fn new(center: f64, exponent: f64) -> Self {
        Self { center, exponent }
    }

    /// Pointwise value; `+∞` at the center for negative exponents.
    pub fn value(&self, x: f64) -> f64 {
        let d = abs(x - self.center);
        if self.exponent == 0.0 {
            1.0
        } else {
            powf(d, self.exponent)
        }
    }
}

/// Piecewise-linear interpolant through positive samples, extended by the
/// end values outside the sample range.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Tabulated {
    /// Validates strictly increasing abscissae and positive finite samples.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidTable("x and y lengths differ"));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidTable("need at least two samples"));
        }
        if xs.iter().any(|x| !x.is_finite()) || xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidTable("abscissae must be finite and strictly increasing"));
        }
        if ys.iter().any(|y| !(y.is_finite() && *y > 0.0)) {
            return Err(Error::InvalidTable("samples must be positive and finite"));
        }
        Ok(Self { xs, ys })
    }

    /// The constant `c > 0`, stored as a two-sample table.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(alloc::vec![0.0, 1.0], alloc::vec![c, c])
    }

    /// Sample abscissae.
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    /// Sample values.
    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// `Some(c)` when every sample equals `c`.
    pub fn as_constant(&self) -> Option<f64> {
        let c = self.ys[0];
        self.ys.iter().all(|&y| y == c).then_some(c)
    }

    /// Interpolated value.
    pub fn value(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let j = self.xs.partition_point(|&t| t <= x) - 1;
        let (x0, x1, y0, y1) = (self.xs[j], self.xs[j + 1], self.ys[j], self.ys[j + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    fn pow(&self, s: f64) -> Self {
        Self { xs: self.xs.clone(), ys: self.ys.iter().map(|&y| powf(y, s)).collect() }
    }
}

/// A weight on the line: a.e. positive and locally integrable.
///
/// The family is closed under real powers: `Power{a, ν}^s = Power{a, sν}`,
/// tables are raised pointwise and products factorwise.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Weight {
    /// `w ≡ 1`.
    Unit,
    /// `|x - a|^ν`.
    Power(PowerWeight),
    /// Pointwise product of the factors.
    Product {
        /// Factors, kept in normal form by [`Weight::product`].
        factors: Vec<Weight>,
    },
    /// Piecewise-linear table.
    Tabulated(Tabulated),
}

impl Weight {
    /// `|x - a|^ν`; exponent `0` collapses to [`Weight::Unit`].
    pub fn power(center: f64, exponent: f64) -> Self {
        if exponent == 0.0 {
            Weight::Unit
        } else {
            Weight::Power(PowerWeight::new(center, exponent))
        }
    }

    /// Normalized product: nested products are flattened, unit factors
    /// dropped, powers with a common center merged and constant tables
    /// folded into one.
    pub fn product(factors: impl IntoIterator<Item = Weight>) -> Self {
        let mut flat = Vec::new();
        flatten(factors, &mut flat);

        let mut powers: Vec<PowerWeight> = Vec::new();
        let mut constant = 1.0;
        let mut rest = Vec::new();
        for w in flat {
            match w {
                Weight::Power(pw) => match powers.iter_mut().find(|q| q.center == pw.center) {
                    Some(q) => q.exponent += pw.exponent,
                    None => powers.push(pw),
                },
                Weight::Tabulated(t) => match t.as_constant() {
                    Some(c) => constant *= c,
                    None => rest.push(Weight::Tabulated(t)),
                },
                Weight::Unit | Weight::Product { .. } => {}
            }
        }
        powers.retain(|q| q.exponent != 0.0);
        powers.sort_by(|a, b| a.center.total_cmp(&b.center));

        let mut out: Vec<Weight> = Vec::new();
        if constant != 1.0 {
            if let Ok(t) = Tabulated::constant(constant) {
                out.push(Weight::Tabulated(t));
            }
        }
        out.extend(powers.into_iter().map(Weight::Power));
        out.extend(rest);
        match out.len() {
            0 => Weight::Unit,
            1 => out.pop().unwrap_or(Weight::Unit),
            _ => Weight::Product { factors: out },
        }
    }

    /// `c · w` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Ok(Weight::product([Weight::Tabulated(Tabulated::constant(c)?), self.clone()]))
    }

    /// `w^s`. Pure exponent algebra; integrability is not checked here.
    pub fn pow(&self, s: f64) -> Self {
        match self {
            Weight::Unit => Weight::Unit,
            Weight::Power(pw) => Weight::power(pw.center, pw.exponent * s),
            Weight::Product { factors } => Weight::product(factors.iter().map(|f| f.pow(s))),
            Weight::Tabulated(t) => Weight::Tabulated(t.pow(s)),
        }
    }

    /// Checks local integrability in dimension `n`: every power exponent,
    /// after merging factors with a common center, must exceed `-n`.
    pub fn validate(&self, n: u32) -> Result<()> {
        let floor = -(n as f64);
        match self {
            Weight::Unit | Weight::Tabulated(_) => Ok(()),
            Weight::Power(pw) => {
                if pw.exponent.is_finite() && pw.exponent > floor && pw.center.is_finite() {
                    Ok(())
                } else {
                    Err(Error::NonIntegrable { exponent: pw.exponent, dim: n })
                }
            }
            Weight::Product { factors } => factors.iter().try_for_each(|f| f.validate(n)),
        }
    }

    /// Pointwise value.
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Weight::Unit => 1.0,
            Weight::Power(pw) => pw.value(x),
            Weight::Product { factors } => factors.iter().map(|f| f.value(x)).product(),
            Weight::Tabulated(t) => t.value(x),
        }
    }

    /// Centers of the power factors, sorted.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        self.collect_singular(&mut pts);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    fn collect_singular(&self, out: &mut Vec<f64>) {
        match self {
            Weight::Power(pw) => out.push(pw.center),
            Weight::Product { factors } => factors.iter().for_each(|f| f.collect_singular(out)),
            _ => {}
        }
    }

    /// The power factors, if the weight is `c · Π |x - a_i|^{ν_i}`; returns the
    /// constant and the factors.
    pub(crate) fn as_scaled_powers(&self) -> Option<(f64, Vec<PowerWeight>)> {
        match self {
            Weight::Unit => Some((1.0, Vec::new())),
            Weight::Power(pw) => Some((1.0, alloc::vec![*pw])),
            Weight::Tabulated(t) => t.as_constant().map(|c| (c, Vec::new())),
            Weight::Product { factors } => {
                let mut c = 1.0;
                let mut pws = Vec::new();
                for f in factors {
                    let (fc, fp) = f.as_scaled_powers()?;
                    c *= fc;
                    pws.extend(fp);
                }
                Some((c, pws))
            }
        }
    }
}

fn flatten(factors: impl IntoIterator<Item = Weight>, out: &mut Vec<Weight>) {
    for f in factors {
        match f {
            Weight::Product { factors } => flatten(factors, out),
            other => out.push(other),
        }
    }
}

/// Weight on the plane; only the unit and power kinds are supported there.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PlanarWeight {
    /// `w ≡ 1`.
    Unit,
    /// `|y - a|^ν`.
    Power {
        /// Singular point.
        center: [f64; 2],
        /// Exponent, `> -2`.
        exponent: f64,
    },
}

/// Exponent `-(1-λ)/(λ+p-1)` of the dual weight.
pub fn dual_exponent(params: &MorreyParams) -> Result<f64> {
    params.dual_exponent()
}

/// Dual weight `w_* = w^{-(1-λ)/(λ+p-1)}`.
///
/// Fails with [`Error::NonIntegrable`] when a resulting power exponent is
/// `<= -n`; [`Error::is_boundary`] tells whether it sits exactly on `-n`.
pub fn dual_weight(w: &Weight, params: &MorreyParams) -> Result<Weight> {
    let dual = w.pow(params.dual_exponent()?);
    dual.validate(params.n())?;
    Ok(dual)
}
