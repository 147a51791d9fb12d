//! Subordination functions for free additive and multiplicative convolution.

mod additive;
mod multiplicative;
#[cfg(test)]
mod proptests;

pub use additive::{additive_subord, additive_subord_matrix, resolvent_identity_check, ResolventCheck};
pub use multiplicative::{mult_series_subord, mult_unitary_subord, taylor_coefficients};

use crate::freeprob::FpError;
use crate::ncalg::CMatrix;
use crate::transforms::TransformError;
use num::complex::Complex64;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Initial step weight in `(0, 1]`, halved whenever the residual grows and regrown by a quarter while it falls.
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: 1e-12, max_iter: 10_000, damping: 1.0 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SubordError> {
        if !(self.tol > 0.0) || self.max_iter == 0 || !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(SubordError::InvalidConfig);
        }
        Ok(())
    }
}

fn ser_c64<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Scalar fixed point; `value` is `G` (additive) or `ψ` (multiplicative).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubordResult {
    #[serde(serialize_with = "ser_c64")]
    pub point: Complex64,
    #[serde(serialize_with = "ser_c64")]
    pub omega1: Complex64,
    #[serde(serialize_with = "ser_c64")]
    pub omega2: Complex64,
    #[serde(serialize_with = "ser_c64")]
    pub value: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSubordResult {
    pub point: CMatrix,
    pub omega1: CMatrix,
    pub omega2: CMatrix,
    pub value: CMatrix,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SubordError {
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64, last: Box<SubordResult> },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    MatrixNonConvergence { iterations: usize, residual: f64 },
    /// Both first moments vanish or `U` is Haar: `ψ_{UV} ≡ 0` and `ω` is not determined by traces.
    #[error("degenerate input: ψ of the product vanishes identically and ω is not determined")]
    Degenerate { psi: Complex64 },
    #[error("solver configuration is invalid")]
    InvalidConfig,
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Algebra(#[from] FpError),
}
