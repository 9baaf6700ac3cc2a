use crate::error::{Error, Result};

/// The triple `(p, λ, n)` shared by every functional.
///
/// Invariants: `p >= 1`, `0 <= λ < 1`, `n ∈ {1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MorreyParams {
    p: f64,
    lambda: f64,
    n: u32,
}

impl MorreyParams {
    /// Validates and builds the parameter triple.
    pub fn new(p: f64, lambda: f64, n: u32) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidParameter { name: "p", value: p, expected: "p >= 1" });
        }
        if !(lambda.is_finite() && (0.0..1.0).contains(&lambda)) {
            return Err(Error::InvalidParameter { name: "lambda", value: lambda, expected: "0 <= lambda < 1" });
        }
        if !(n == 1 || n == 2) {
            return Err(Error::InvalidParameter { name: "n", value: n as f64, expected: "n in {1, 2}" });
        }
        Ok(Self { p, lambda, n })
    }

    /// One-dimensional parameters.
    pub fn line(p: f64, lambda: f64) -> Result<Self> {
        Self::new(p, lambda, 1)
    }

    /// Integrability exponent `p`.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Morrey exponent `λ`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Spatial dimension.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same `(p, n)` with a different `λ`.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.p, lambda, self.n)
    }

    /// `β = 1/(λ+p-1)`.
    pub fn beta(&self) -> Result<f64> {
        beta(self)
    }

    /// Exponent of the dual weight, `-(1-λ)/(λ+p-1)`.
    pub fn dual_exponent(&self) -> Result<f64> {
        Ok(-(1.0 - self.lambda) * self.beta()?)
    }

    pub(crate) fn require_line(&self, op: &'static str) -> Result<()> {
        if self.n == 1 {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension { op, dim: self.n })
        }
    }
}

/// `β = 1/(λ+p-1)`; fails only for `p = 1, λ = 0`.
pub fn beta(params: &MorreyParams) -> Result<f64> {
    let denom = params.lambda + params.p - 1.0;
    if denom <= 0.0 {
        return Err(Error::DegenerateParameters { p: params.p, lambda: params.lambda });
    }
    Ok(1.0 / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_examples() {
        assert_eq!(beta(&MorreyParams::line(2.0, 0.0).unwrap()).unwrap(), 1.0);
        let b = beta(&MorreyParams::line(2.0, 0.5).unwrap()).unwrap();
        assert!((b - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(beta(&MorreyParams::line(1.0, 0.5).unwrap()).unwrap(), 2.0);
    }

    #[test]
    fn beta_degenerate() {
        let params = MorreyParams::line(1.0, 0.0).unwrap();
        assert!(matches!(beta(&params), Err(Error::DegenerateParameters { .. })));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(MorreyParams::line(0.5, 0.0).is_err());
        assert!(MorreyParams::line(2.0, 1.0).is_err());
        assert!(MorreyParams::line(2.0, -0.1).is_err());
        assert!(MorreyParams::new(2.0, 0.1, 3).is_err());
    }

    #[test]
    fn lambda_zero_dual_exponent_is_one_minus_conjugate() {
        for p in [1.5, 2.0, 3.0, 4.0] {
            let params = MorreyParams::line(p, 0.0).unwrap();
            let conj = p / (p - 1.0);
            assert!((params.dual_exponent().unwrap() - (1.0 - conj)).abs() < 1e-14);
        }
    }
}
