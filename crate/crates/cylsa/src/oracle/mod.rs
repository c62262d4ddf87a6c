//! Independent verification paths: semi-analytic quadrature of the master
//! integral and a geometry-only Monte Carlo ray tracer.
//!
//! The quadrature reuses the limit functions from [`crate::geometry`] (shared
//! trust base with nothing in [`crate::analytic`]); the ray tracer shares
//! nothing with the analytic path except the scene definition itself. The two
//! together are the anti-circularity guarantee behind the acceptance suite.

pub mod mc;
pub mod quad;
mod sweep;

pub use mc::{mc_omega, mc_omega_case, mc_omega_partitioned, DEFAULT_PARTITIONS, RNG_ID};
pub use quad::{quad_omega, quad_omega_with, QuadOptions};
pub use sweep::{sweep, sweep_rows, SweepParam, SweepRow};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

/// An oracle value with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub value: f64,
    /// Standard error for Monte Carlo, achieved absolute error bound for
    /// quadrature.
    pub uncertainty: f64,
    /// Sample count (Monte Carlo only).
    pub n_samples: Option<u64>,
    /// Base seed (Monte Carlo only).
    pub seed: Option<u64>,
    pub method: Method,
}
