//! Error type shared across the library.

use thiserror::Error;

use crate::geometry::{CaseId, Surface};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The scene violates a basic precondition (r > 0, z1 < z2, finite inputs).
    #[error("invalid scene: {0}")]
    InvalidScene(String),

    /// d < r with z1 < 0 < z2: the emitter sits inside the detector volume,
    /// for which no closed form is provided.
    #[error("source lies inside the detector (d < r and z1 < 0 < z2)")]
    SourceInsideDetector,

    /// A case-(ii) evaluation with L1 = 0: the near end plane passes through
    /// the source and the integration limits degenerate. Nudge z1 away from 0.
    #[error("near end plane passes through the source (L1 = 0 in case ii); nudge z1 away from 0")]
    AdjacentCap,

    /// An angular argument left the valid domain (e.g. |phi| > phi0 beyond
    /// the radicand clamp tolerance).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested emitting surface does not contribute in this case.
    #[error("case {case:?} has no {surface:?} contribution")]
    SurfaceNotPresent { case: CaseId, surface: Surface },

    /// The assembled solid angle left [0, 1] by more than 1e-9.
    #[error("solid angle {value} outside [0, 1] beyond tolerance")]
    NumericalInconsistency { value: f64 },

    /// The adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not reach the requested tolerance {requested:e} (achieved {achieved:e} with {panels} panels)")]
    NonConvergence {
        requested: f64,
        achieved: f64,
        panels: usize,
    },
}

impl Error {
    /// Stable machine-readable code, used in CLI stderr records and CSV flags.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidScene(_) => "InvalidScene",
            Error::SourceInsideDetector => "SourceInsideDetector",
            Error::AdjacentCap => "AdjacentCap",
            Error::Domain(_) => "DomainError",
            Error::SurfaceNotPresent { .. } => "SurfaceNotPresent",
            Error::NumericalInconsistency { .. } => "NumericalInconsistency",
            Error::NonConvergence { .. } => "NonConvergence",
        }
    }
}
