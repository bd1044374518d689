//! From-scratch special functions required by the closed-form solutions:
//! the principal-branch Lambert W ("Product Log") and the Gauss
//! hypergeometric function ₂F₁, plus adaptive Gauss–Kronrod quadrature used
//! for pressure reconstruction and the hypergeometric family's
//! antiderivatives.

mod hyp2f1;
mod lambert;
mod quad;

pub use hyp2f1::hyp2f1;
pub use lambert::{lambert_w0, lambert_w0_complex};
pub use quad::{integrate, QuadError};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("argument {z} below the Lambert W branch point -1/e = {branch_point}; W0 is real only for z >= -1/e")]
    BelowBranchPoint { z: f64, branch_point: f64 },
    #[error("hypergeometric pole: c = {c} is a non-positive integer")]
    PoleAtNonpositiveC { c: String },
    #[error("series did not converge within {max_terms} terms (last |term|/|sum| = {last_ratio:.3e})")]
    Convergence { max_terms: usize, last_ratio: f64 },
    #[error("argument z = {z} outside the supported evaluation region (core |z| <= 0.5 plus one Pfaff transformation)")]
    OutOfCoreRegion { z: String },
    #[error("argument z = {z} lies on the branch cut [1, inf) of 2F1")]
    BranchCut { z: String },
    #[error("invalid series configuration: {0}")]
    BadConfig(String),
    #[error("iteration failed to converge for argument {z}")]
    NoConvergence { z: String },
}

/// Termination control for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Relative termination tolerance.
    pub tol: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            max_terms: 600,
            tol: 1e-16,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<(), SpecialError> {
        if self.max_terms < 1 {
            return Err(SpecialError::BadConfig("max_terms must be >= 1".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(SpecialError::BadConfig(format!(
                "tol must lie in (0, 1), got {}",
                self.tol
            )));
        }
        Ok(())
    }
}
