use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath::abs;

/// Compactly supported piecewise-constant function on the line.
///
/// Cell `i` is `(breakpoints[i], breakpoints[i+1])` with value `values[i]`;
/// the function vanishes outside `[first, last]`. Construction canonicalizes:
/// zero cells at either end are trimmed and equal neighbours merged, so every
/// stored breakpoint is a genuine jump.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    /// Validates and canonicalizes.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() && values.is_empty() {
            return Ok(Self::zero());
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidStepFunction("need exactly one value per cell"));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidStepFunction("non-finite entry"));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidStepFunction("breakpoints must be strictly increasing"));
        }

        let mut bps: Vec<f64> = Vec::with_capacity(breakpoints.len());
        let mut vals: Vec<f64> = Vec::with_capacity(values.len());
        bps.push(breakpoints[0]);
        for (i, &v) in values.iter().enumerate() {
            let right = breakpoints[i + 1];
            match vals.last() {
                Some(&last) if last == v => {
                    *bps.last_mut().expect("non-empty") = right;
                }
                _ => {
                    vals.push(v);
                    bps.push(right);
                }
            }
        }
        // trim zero cells at both ends
        let first = vals.iter().position(|&v| v != 0.0);
        let Some(first) = first else {
            return Ok(Self::zero());
        };
        let last = vals.iter().rposition(|&v| v != 0.0).expect("some nonzero");
        let values = vals[first..=last].to_vec();
        let breakpoints = bps[first..=last + 1].to_vec();
        Ok(Self { breakpoints, values })
    }

    /// The zero function.
    pub fn zero() -> Self {
        Self { breakpoints: Vec::new(), values: Vec::new() }
    }

    /// `χ_(lo, hi)`.
    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo, hi], alloc::vec![1.0])
    }

    /// Breakpoints (strictly increasing).
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Cell values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// True for the zero function.
    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `[first, last]` breakpoint, if any.
    pub fn support(&self) -> Option<(f64, f64)> {
        Some((*self.breakpoints.first()?, *self.breakpoints.last()?))
    }

    /// Iterator over `(lo, hi, value)` cells.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.breakpoints[i], self.breakpoints[i + 1], v))
    }

    /// `c · f`.
    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        Self { breakpoints: self.breakpoints.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Value at `x`; right-continuous at breakpoints.
    pub fn value(&self, x: f64) -> f64 {
        let Some((lo, hi)) = self.support() else { return 0.0 };
        if x < lo || x >= hi {
            return 0.0;
        }
        let j = self.breakpoints.partition_point(|&b| b <= x) - 1;
        self.values[j]
    }

    /// `max |f|`.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(abs(*v)))
    }
}
