//! Pressure reconstruction by line-integrating the momentum equations, and
//! the concordance check against the families' printed formulas.
//!
//! The modified-pressure gradient is known analytically from the momentum
//! balance (no pressure needed):
//!   G₁ = ρvω + μ∇²u − α₁v∇²ω − (H + μ/K)u,
//!   G₂ = −ρuω + μ∇²v + α₁u∇²ω − (H + μ/K)v,
//! so p̂ follows by integrating G along axis-aligned paths from an anchor,
//! and p by removing the kinetic and second-grade corrections.

use super::VerifyError;
use crate::field::Grid;
use crate::params::FluidParams;
use crate::solutions::{FlowSolution, PsiDerivs, SolutionError, StreamField};
use crate::special::integrate;
use num_complex::Complex64;
use serde::Serialize;
use std::cell::RefCell;

/// |A₁|² in component form: 4u_x² + 4v_y² + 2(u_y + v_x)², continued
/// analytically for complex fields.
pub fn a1_sq(d: &PsiDerivs) -> Complex64 {
    let ux = d.d(1, 1);
    let vy = -d.d(1, 1);
    let uy = d.d(0, 2);
    let vx = -d.d(2, 0);
    4.0 * ux * ux + 4.0 * vy * vy + 2.0 * (uy + vx) * (uy + vx)
}

/// p̂ − p: the dynamic and second-grade corrections of the modified
/// pressure, ½ρ(u² + v²) − α₁[u∇²u + v∇²v + ¼|A₁|²].
pub fn kinetic_correction(p: &FluidParams, d: &PsiDerivs) -> Complex64 {
    let u = d.u();
    let v = d.v();
    let lap_u = d.d(2, 1) + d.d(0, 3);
    let lap_v = -(d.d(3, 0) + d.d(1, 2));
    0.5 * p.rho * (u * u + v * v) - p.alpha1 * (u * lap_u + v * lap_v + 0.25 * a1_sq(d))
}

fn grad_phat(
    sol: &FlowSolution,
    x: f64,
    y: f64,
) -> Result<(Complex64, Complex64), SolutionError> {
    let p = sol.fluid();
    let damping = p.h_factor() + p.mu_over_k();
    let d = sol.derivs(x, y)?;
    let u = d.u();
    let v = d.v();
    let om = d.omega();
    let lap_u = d.d(2, 1) + d.d(0, 3);
    let lap_v = -(d.d(3, 0) + d.d(1, 2));
    let lap_om = -d.biharmonic();
    let g1 = p.rho * (v * om) + p.mu * lap_u - p.alpha1 * (v * lap_om) - damping * u;
    let g2 = -p.rho * (u * om) + p.mu * lap_v + p.alpha1 * (u * lap_om) - damping * v;
    Ok((g1, g2))
}

/// Pressure field evaluator backed by line integrals of the momentum
/// equations from an anchor point.
#[derive(Debug)]
pub struct PressureReconstruction<'a> {
    sol: &'a FlowSolution,
    pub anchor: (f64, f64),
    anchor_phat: Complex64,
    quad_tol: f64,
}

fn integrate_captured<F: Fn(f64) -> Result<Complex64, SolutionError>>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64, VerifyError> {
    let captured: RefCell<Option<SolutionError>> = RefCell::new(None);
    let integrand = |t: f64| match f(t) {
        Ok(v) => v,
        Err(e) => {
            captured.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, f64::NAN)
        }
    };
    let v = integrate(&integrand, a, b, tol);
    if let Some(e) = captured.into_inner() {
        return Err(e.into());
    }
    Ok(v?)
}

impl<'a> PressureReconstruction<'a> {
    /// p̂ by integration along (x₀,y₀) → (x,y₀) → (x,y).
    pub fn p_hat(&self, x: f64, y: f64) -> Result<Complex64, SolutionError> {
        let (x0, y0) = self.anchor;
        let leg_x = integrate_captured(
            |t| grad_phat(self.sol, t, y0).map(|g| g.0),
            x0,
            x,
            self.quad_tol,
        );
        let leg_y = integrate_captured(
            |t| grad_phat(self.sol, x, t).map(|g| g.1),
            y0,
            y,
            self.quad_tol,
        );
        match (leg_x, leg_y) {
            (Ok(a), Ok(b)) => Ok(self.anchor_phat + a + b),
            (Err(VerifyError::Solution(e)), _) | (_, Err(VerifyError::Solution(e))) => Err(e),
            (Err(e), _) | (_, Err(e)) => Err(SolutionError::BadShape(e.to_string())),
        }
    }

    /// The physical pressure p = p̂ − ½ρ(u²+v²) + α₁[u∇²u + v∇²v + ¼|A₁|²].
    pub fn pressure(&self, x: f64, y: f64) -> Result<Complex64, SolutionError> {
        let d = self.sol.derivs(x, y)?;
        Ok(self.p_hat(x, y)? - kinetic_correction(self.sol.fluid(), &d))
    }

    /// ∮ ∇p̂ · dl around an axis-aligned rectangle; zero for an exact
    /// gradient field.
    pub fn loop_integral(&self, window: [f64; 4]) -> Result<Complex64, VerifyError> {
        let [x0, x1, y0, y1] = window;
        let bottom = integrate_captured(|t| grad_phat(self.sol, t, y0).map(|g| g.0), x0, x1, self.quad_tol)?;
        let right = integrate_captured(|t| grad_phat(self.sol, x1, t).map(|g| g.1), y0, y1, self.quad_tol)?;
        let top = integrate_captured(|t| grad_phat(self.sol, t, y1).map(|g| g.0), x1, x0, self.quad_tol)?;
        let left = integrate_captured(|t| grad_phat(self.sol, x0, t).map(|g| g.1), y1, y0, self.quad_tol)?;
        Ok(bottom + right + top + left)
    }
}

/// Build the evaluator after verifying the integrability condition
/// ∂²p̂/∂x∂y = ∂²p̂/∂y∂x (curl of G) on a subsample of the grid.
pub fn reconstruct_pressure<'a>(
    sol: &'a FlowSolution,
    anchor: (f64, f64),
    grid: &Grid,
    quad_tol: f64,
) -> Result<PressureReconstruction<'a>, VerifyError> {
    grid.validate().map_err(|e| VerifyError::Grid(e.to_string()))?;
    let h = 1e-4 * (grid.dx().max(grid.dy()).max(1.0));
    let c = [1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0];
    let off = [-2.0, -1.0, 1.0, 2.0];
    let samples = 5usize;
    for jj in 0..samples {
        for ii in 0..samples {
            let x = grid.x0 + (grid.x1 - grid.x0) * (ii as f64 + 0.5) / samples as f64;
            let y = grid.y0 + (grid.y1 - grid.y0) * (jj as f64 + 0.5) / samples as f64;
            let mut g1_y = Complex64::new(0.0, 0.0);
            let mut g2_x = Complex64::new(0.0, 0.0);
            let mut scale = 0.0f64;
            let mut region = false;
            for (w, o) in c.iter().zip(off) {
                match (grad_phat(sol, x, y + o * h), grad_phat(sol, x + o * h, y)) {
                    (Ok(gy), Ok(gx)) => {
                        g1_y += *w * gy.0;
                        g2_x += *w * gx.1;
                        scale = scale.max(gy.0.norm()).max(gx.1.norm());
                    }
                    (Err(SolutionError::EvaluationRegion { .. }), _)
                    | (_, Err(SolutionError::EvaluationRegion { .. })) => {
                        region = true;
                        break;
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e.into()),
                }
            }
            if region {
                continue;
            }
            g1_y /= h;
            g2_x /= h;
            let curl = (g1_y - g2_x).norm();
            let denom = g1_y.norm().max(g2_x.norm()).max(scale).max(1.0);
            if curl > 1e-7 * denom {
                return Err(VerifyError::InconsistentField {
                    x,
                    y,
                    residual: curl / denom,
                });
            }
        }
    }
    let d0 = sol.derivs(anchor.0, anchor.1)?;
    let p_ref = match sol {
        FlowSolution::A(f) => f.p_ref,
        FlowSolution::B(f) => f.p_ref,
        FlowSolution::C(f) => f.p_ref,
    };
    let anchor_phat = Complex64::new(p_ref, 0.0) + kinetic_correction(sol.fluid(), &d0);
    Ok(PressureReconstruction {
        sol,
        anchor,
        anchor_phat,
        quad_tol,
    })
}

/// Outcome of comparing the reconstruction against the printed formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "flag")]
pub enum ConcordanceFlag {
    /// Printed and reconstructed pressures differ by at most a constant.
    Agrees,
    /// The difference varies across the grid: the printed formula does not
    /// satisfy the momentum equations.
    Disagrees { max_deviation: f64 },
    NoPrintedFormula,
}

/// Sample p_rec − p_printed on a coarse subgrid; agreement means the
/// difference is constant to 1e−7 (gauge freedom allows any constant).
pub fn pressure_concordance(
    sol: &FlowSolution,
    rec: &PressureReconstruction,
    grid: &Grid,
) -> Result<ConcordanceFlag, VerifyError> {
    let n = 5usize;
    let mut diffs: Vec<Complex64> = Vec::new();
    let mut scale = 1.0f64;
    for jj in 0..n {
        for ii in 0..n {
            let x = grid.x0 + (grid.x1 - grid.x0) * ii as f64 / (n - 1) as f64;
            let y = grid.y0 + (grid.y1 - grid.y0) * jj as f64 / (n - 1) as f64;
            let printed = match sol.printed_pressure(x, y) {
                Ok(Some(p)) => p,
                Ok(None) => return Ok(ConcordanceFlag::NoPrintedFormula),
                Err(SolutionError::EvaluationRegion { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            let recon = match rec.pressure(x, y) {
                Ok(p) => p,
                Err(SolutionError::EvaluationRegion { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            scale = scale.max(printed.norm()).max(recon.norm());
            diffs.push(recon - printed);
        }
    }
    if diffs.is_empty() {
        return Ok(ConcordanceFlag::NoPrintedFormula);
    }
    let spread = |get: fn(&Complex64) -> f64| {
        let lo = diffs.iter().map(&get).fold(f64::INFINITY, f64::min);
        let hi = diffs.iter().map(&get).fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let dev = spread(|z| z.re).max(spread(|z| z.im)) / scale;
    if dev < 1e-7 {
        Ok(ConcordanceFlag::Agrees)
    } else {
        Ok(ConcordanceFlag::Disagrees { max_deviation: dev })
    }
}
