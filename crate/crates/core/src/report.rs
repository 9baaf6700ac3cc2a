use alloc::vec::Vec;

use crate::geometry::{Ball, BallFamily};

/// Why a sup-type functional was flagged as diverging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DivergenceCause {
    /// Each of the last two probes multiplied the value by at least the
    /// family's divergence ratio.
    Growth,
    /// Some candidate ball required integrating a non-integrable power.
    NonIntegrable,
    /// The weight failed the admissibility precheck.
    Inadmissible,
}

/// Outcome of a sup search over a ball family.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FunctionalReport {
    /// Largest value found: a lower estimate of the supremum.
    pub value: f64,
    /// Maximizing ball (lexicographically smallest among ties).
    pub argmax: Ball,
    /// Base family the search started from.
    pub family: BallFamily,
    /// Running maximum after the base grid, each zoom round and each probe.
    pub refine_trace: Vec<f64>,
    /// True when blowup was detected.
    pub diverging: bool,
    /// Reason for `diverging`, if set.
    pub cause: Option<DivergenceCause>,
    /// Candidate balls whose evaluation failed.
    pub failed_balls: usize,
}

impl FunctionalReport {
    /// Marks the report as diverging for `cause`.
    pub fn flag(mut self, cause: DivergenceCause) -> Self {
        self.diverging = true;
        self.cause = Some(cause);
        self
    }

    /// Finite and not diverging.
    pub fn is_bounded(&self) -> bool {
        !self.diverging && self.value.is_finite()
    }
}
