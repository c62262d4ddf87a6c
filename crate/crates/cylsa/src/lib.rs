//! Emission fraction of a point cosine source intercepted by a right
//! circular cylinder with axis orthogonal to the source axis.
//!
//! The source emits with probability density (k . w)/pi over the forward
//! hemisphere; the "solid angle" computed here is the emission-weighted
//! fraction of directions that strike the cylinder, a dimensionless number
//! in [0, 1]. The closed forms live in [`analytic`], scene classification
//! and the integration-limit machinery in [`geometry`], and two independent
//! verification paths (adaptive quadrature of the master integral and a
//! Monte Carlo ray tracer) in [`oracle`].
//!
//! ```
//! use cylsa::{solid_angle, CylinderScene};
//!
//! let scene = CylinderScene { r: 1.0, d: 2.0, z1: 5.0, z2: 15.0, alpha: 0.0 };
//! let sa = solid_angle(&scene).unwrap();
//! assert!(sa.value > 0.0 && sa.value < 1.0);
//! ```
//!
//! All operations are pure functions of their inputs; values are immutable
//! and freely shareable across threads.

pub mod analytic;
pub mod error;
pub mod geometry;
pub mod oracle;

pub use analytic::{omega, omega_traced, Breakdown, SolidAngle};
pub use error::{Error, Result};
pub use geometry::{classify, CanonicalCase, CaseId, CylinderScene};

/// Classify a scene and evaluate its emission fraction in one step.
pub fn solid_angle(scene: &CylinderScene) -> Result<SolidAngle> {
    omega(&classify(scene)?)
}
