//! Independent numerical certification of solution fields against the
//! governing equations: compatibility and momentum residuals on grids,
//! finite-difference cross-checks of the analytic derivatives, and pressure
//! reconstruction by line-integrating the momentum equations.

mod injected;
mod operators;
mod pressure;
mod residual;

pub use injected::InjectedField;
pub use operators::{differential_operators, fd_derivs, DiffOperators, FdOptions};
pub use pressure::{
    pressure_concordance, reconstruct_pressure, ConcordanceFlag, PressureReconstruction,
};
pub use residual::{
    compatibility_residual, compatibility_residual_point, compatibility_terms,
    continuity_residual, momentum_residual, CompatibilityReport, EquationTag, MomentumReport,
    OperatorCoeffs, PointResidual, PressureSource, ResidualPath, ResidualReport,
};

use crate::solutions::SolutionError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("stencil evaluation failed at ({x}, {y}): {detail}")]
    Stencil { x: f64, y: f64, detail: String },
    #[error("field evaluation failed: {0}")]
    Solution(#[from] SolutionError),
    #[error("pressure gradient is not integrable (curl residual {residual:.3e} at ({x}, {y})); the field does not satisfy a compatible momentum balance")]
    InconsistentField { x: f64, y: f64, residual: f64 },
    #[error("no printed pressure formula for this family; use the reconstructed source")]
    NoPrintedPressure,
    #[error(transparent)]
    Quad(#[from] crate::special::QuadError),
    #[error("grid error: {0}")]
    Grid(String),
}
