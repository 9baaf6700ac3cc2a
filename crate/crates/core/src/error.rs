use core::fmt;

/// Errors raised by parameter validation and by the numerical kernels.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Error {
    /// `λ + p - 1 <= 0`, so `β = 1/(λ+p-1)` is undefined.
    DegenerateParameters {
        /// Integrability exponent.
        p: f64,
        /// Morrey exponent.
        lambda: f64,
    },
    /// A scalar argument is outside its admissible range.
    InvalidParameter {
        /// Field or argument name.
        name: &'static str,
        /// Offending value.
        value: f64,
        /// Admissible range, human readable.
        expected: &'static str,
    },
    /// A power singularity `|x-a|^ν` with `ν <= -n` was integrated across `a`.
    NonIntegrable {
        /// Exponent of the offending power factor.
        exponent: f64,
        /// Spatial dimension.
        dim: u32,
    },
    /// The operation is only implemented for some dimensions.
    UnsupportedDimension {
        /// Operation name.
        op: &'static str,
        /// Requested dimension.
        dim: u32,
    },
    /// The weight kind is not supported by the operation.
    UnsupportedWeight {
        /// Operation name.
        op: &'static str,
    },
    /// Point evaluation of a Hilbert transform landed on a jump.
    Breakpoint {
        /// Evaluation point.
        x: f64,
    },
    /// Malformed step function.
    InvalidStepFunction(&'static str),
    /// Malformed tabulated weight.
    InvalidTable(&'static str),
    /// Malformed ball family.
    InvalidFamily(&'static str),
    /// The two intervals are not adjacent with equal lengths `<= 1`.
    InvalidPair(&'static str),
    /// A norm that must be positive evaluated to zero.
    ZeroNorm,
    /// An admissibility condition failed (`1` for `w`, `2` for the dual weight).
    Inadmissible {
        /// Which condition.
        condition: u8,
    },
}

impl Error {
    /// True for [`Error::NonIntegrable`] sitting exactly on the `ν = -n` boundary.
    pub fn is_boundary(&self) -> bool {
        matches!(self, Error::NonIntegrable { exponent, dim } if *exponent == -(*dim as f64))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateParameters { p, lambda } => {
                write!(f, "degenerate parameters: lambda + p - 1 = {} <= 0", lambda + p - 1.0)
            }
            Error::InvalidParameter { name, value, expected } => {
                write!(f, "invalid {name} = {value}: expected {expected}")
            }
            Error::NonIntegrable { exponent, dim } => {
                if self.is_boundary() {
                    write!(f, "power exponent {exponent} sits on the integrability boundary -{dim}")
                } else {
                    write!(f, "power exponent {exponent} <= -{dim} is not locally integrable")
                }
            }
            Error::UnsupportedDimension { op, dim } => {
                write!(f, "{op} does not support dimension n = {dim}")
            }
            Error::UnsupportedWeight { op } => write!(f, "{op} does not support this weight kind"),
            Error::Breakpoint { x } => write!(f, "evaluation point {x} is a breakpoint"),
            Error::InvalidStepFunction(msg) => write!(f, "invalid step function: {msg}"),
            Error::InvalidTable(msg) => write!(f, "invalid tabulated weight: {msg}"),
            Error::InvalidFamily(msg) => write!(f, "invalid ball family: {msg}"),
            Error::InvalidPair(msg) => write!(f, "invalid adjacent pair: {msg}"),
            Error::ZeroNorm => write!(f, "norm evaluated to zero"),
            Error::Inadmissible { condition } => {
                write!(f, "weight fails admissibility condition {condition}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Crate result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;
