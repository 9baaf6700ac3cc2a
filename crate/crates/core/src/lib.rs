/*! Numerical kernels for weighted Morrey spaces on the line.

The crate evaluates sup-type functionals over finite ball families:

* weighted Morrey norms of step functions and of indicators of balls,
* the Muckenhoupt `A_p` functional,
* the `𝒜_{p,λ}` functional built from weighted norms of indicators and the
  dual weight `w_* = w^{-(1-λ)/(λ+p-1)}`,

together with the exact Hilbert transform of step functions and a harness
that probes operator-norm lower bounds along shrinking test families.

Every sup is taken over a [`BallFamily`] grid, refined around the current
maximizer, and then probed toward smaller radii to detect power-law blowup.
Results come back as a [`FunctionalReport`], whose `value` is a lower
estimate of the true supremum.

The crate is `no_std` with `alloc`. The `std` feature adds
`std::error::Error` impls, `parallel` evaluates ball families on the rayon
pool (results are identical to the serial path), and `serde` derives
serialization for the public data types.
!*/

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]
// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod fmath;
mod geometry;
mod params;
mod quad;
mod report;
mod search;
mod step;
mod weight;

pub mod hilbert;
pub mod measure;
pub mod morrey;
pub mod muckenhoupt;

pub use error::{Error, Result};
pub use geometry::{ball_measure, sphere_area, Ball, BallFamily, Disk, Interval};
pub use params::{beta, MorreyParams};
pub use report::{DivergenceCause, FunctionalReport};
pub use search::{search_sup, BallEval};
pub use step::StepFunction;
pub use weight::{dual_exponent, dual_weight, PlanarWeight, PowerWeight, Tabulated, Weight};

/// Version string embedded in emitted reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
