//! Residual reports for the compatibility, momentum and continuity
//! equations, with both analytic-derivative and finite-difference paths.
//!
//! Every report is normalized by the largest individual term magnitude seen
//! on the grid, so a residual cannot pass vacuously just because all terms
//! are tiny. Complex residuals carry their real and imaginary maxima
//! separately; a pass requires both.

use super::operators::{fd_derivs, FdOptions};
use super::pressure::{kinetic_correction, PressureReconstruction};
use super::VerifyError;
use crate::field::Grid;
use crate::params::FluidParams;
use crate::solutions::{FlowSolution, PsiDerivs, SolutionError, StreamField};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Which governing equation a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationTag {
    Compatibility,
    MomentumX,
    MomentumY,
    Continuity,
    Integrability,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualPath {
    Analytic,
    FiniteDifference {
        h_low: f64,
        h_mid: f64,
        h_high: f64,
        rich_mid: usize,
        rich_high: usize,
    },
}

impl ResidualPath {
    fn fd(opts: &FdOptions) -> Self {
        ResidualPath::FiniteDifference {
            h_low: opts.h_low,
            h_mid: opts.h_mid,
            h_high: opts.h_high,
            rich_mid: opts.rich_mid,
            rich_high: opts.rich_high,
        }
    }
}

/// Coefficients of the steady compatibility operator
///   −ρ{ψ,∇²ψ} − μ∇⁴ψ + α₁{ψ,∇⁴ψ} + (H + μ/K)∇²ψ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorCoeffs {
    pub rho: f64,
    pub mu: f64,
    pub alpha1: f64,
    /// H + μ/K.
    pub damping: Complex64,
}

impl OperatorCoeffs {
    pub fn from_params(p: &FluidParams) -> Self {
        OperatorCoeffs {
            rho: p.rho,
            mu: p.mu,
            alpha1: p.alpha1,
            damping: p.h_factor() + p.mu_over_k(),
        }
    }

    /// The viscous specialization (α₁ = 0, no Hall term, no porous drag).
    pub fn viscous(rho: f64, mu: f64) -> Self {
        OperatorCoeffs {
            rho,
            mu,
            alpha1: 0.0,
            damping: Complex64::new(0.0, 0.0),
        }
    }

    /// Second-grade specialization: K → ∞ and no Hall term.
    pub fn second_grade(rho: f64, mu: f64, alpha1: f64) -> Self {
        OperatorCoeffs {
            rho,
            mu,
            alpha1,
            damping: Complex64::new(0.0, 0.0),
        }
    }
}

/// The four addends of the compatibility operator at one point.
pub fn compatibility_terms(c: &OperatorCoeffs, d: &PsiDerivs) -> [Complex64; 4] {
    let bracket_low = d.d(1, 0) * d.laplacian_y() - d.d(0, 1) * d.laplacian_x();
    let bracket_high = d.d(1, 0) * d.biharmonic_y() - d.d(0, 1) * d.biharmonic_x();
    [
        -c.rho * bracket_low,
        -c.mu * d.biharmonic(),
        c.alpha1 * bracket_high,
        c.damping * d.laplacian(),
    ]
}

/// Full operator value at one point.
pub fn compatibility_residual_point(c: &OperatorCoeffs, d: &PsiDerivs) -> Complex64 {
    compatibility_terms(c, d).into_iter().sum()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PointResidual {
    pub x: f64,
    pub y: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub equation: EquationTag,
    pub path: ResidualPath,
    pub nx: usize,
    pub ny: usize,
    pub window: [f64; 4],
    pub hx: f64,
    pub hy: f64,
    /// Largest individual operator-term magnitude on the grid.
    pub normalization: f64,
    pub max_abs: f64,
    pub rms: f64,
    pub max_re: f64,
    pub max_im: f64,
    pub rel_max: f64,
    pub rel_re: f64,
    pub rel_im: f64,
    pub points: Vec<PointResidual>,
    /// Points excluded by evaluation-region limits.
    pub excluded: Vec<[f64; 2]>,
}

impl ResidualReport {
    fn assemble(
        equation: EquationTag,
        path: ResidualPath,
        grid: &Grid,
        rows: Vec<(f64, f64, Option<(Complex64, f64)>)>,
    ) -> ResidualReport {
        let mut points = Vec::new();
        let mut excluded = Vec::new();
        let mut normalization = 0.0f64;
        for (x, y, entry) in rows {
            match entry {
                Some((r, norm)) => {
                    normalization = normalization.max(norm);
                    points.push(PointResidual {
                        x,
                        y,
                        re: r.re,
                        im: r.im,
                    });
                }
                None => excluded.push([x, y]),
            }
        }
        let max_abs = points
            .iter()
            .map(|p| (p.re * p.re + p.im * p.im).sqrt())
            .fold(0.0, f64::max);
        let max_re = points.iter().map(|p| p.re.abs()).fold(0.0, f64::max);
        let max_im = points.iter().map(|p| p.im.abs()).fold(0.0, f64::max);
        let rms = if points.is_empty() {
            0.0
        } else {
            (points
                .iter()
                .map(|p| p.re * p.re + p.im * p.im)
                .sum::<f64>()
                / points.len() as f64)
                .sqrt()
        };
        let rel = |v: f64| {
            if normalization > 0.0 {
                v / normalization
            } else if v == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        };
        ResidualReport {
            equation,
            path,
            nx: grid.nx,
            ny: grid.ny,
            window: grid.window(),
            hx: grid.dx(),
            hy: grid.dy(),
            normalization,
            max_abs,
            rms,
            max_re,
            max_im,
            rel_max: rel(max_abs),
            rel_re: rel(max_re),
            rel_im: rel(max_im),
            points,
            excluded,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.rel_re <= tol && self.rel_im <= tol
    }

    /// Per-point dump for plotting.
    pub fn points_csv(&self) -> String {
        let mut out = String::from("x,y,re,im,abs\n");
        for p in &self.points {
            let abs = (p.re * p.re + p.im * p.im).sqrt();
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                p.x, p.y, p.re, p.im, abs
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatibilityReport {
    pub analytic: ResidualReport,
    pub finite_difference: ResidualReport,
}

fn grid_points(grid: &Grid) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(grid.nx * grid.ny);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            pts.push((grid.x(i), grid.y(j)));
        }
    }
    pts
}

fn is_region_error(e: &SolutionError) -> bool {
    matches!(e, SolutionError::EvaluationRegion { .. })
}

/// Certify the steady compatibility equation on a grid, through both the
/// analytic-derivative path and the finite-difference oracle.
pub fn compatibility_residual(
    field: &dyn StreamField,
    coeffs: &OperatorCoeffs,
    grid: &Grid,
    fd: &FdOptions,
) -> Result<CompatibilityReport, VerifyError> {
    grid.validate().map_err(|e| VerifyError::Grid(e.to_string()))?;
    let pts = grid_points(grid);
    let fd = *fd;
    let rates = field.growth_rates();

    let eval_terms = |d: &PsiDerivs| {
        let terms = compatibility_terms(coeffs, d);
        let norm = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        (terms.into_iter().sum::<Complex64>(), norm)
    };

    let analytic_rows: Result<Vec<_>, VerifyError> = pts
        .par_iter()
        .map(|&(x, y)| match field.derivs(x, y) {
            Ok(d) => Ok((x, y, Some(eval_terms(&d)))),
            Err(e) if is_region_error(&e) => Ok((x, y, None)),
            Err(e) => Err(e.into()),
        })
        .collect();
    let analytic = ResidualReport::assemble(
        EquationTag::Compatibility,
        ResidualPath::Analytic,
        grid,
        analytic_rows?,
    );

    let psi_fn = |x: f64, y: f64| field.psi(x, y);
    let fd_rows: Result<Vec<_>, VerifyError> = pts
        .par_iter()
        .map(|&(x, y)| match fd_derivs(&psi_fn, x, y, &fd, &rates) {
            Ok(d) => Ok((x, y, Some(eval_terms(&d)))),
            Err(e) if is_region_error(&e) => Ok((x, y, None)),
            Err(e) => Err(VerifyError::Stencil {
                x,
                y,
                detail: e.to_string(),
            }),
        })
        .collect();
    let finite_difference = ResidualReport::assemble(
        EquationTag::Compatibility,
        ResidualPath::fd(&fd),
        grid,
        fd_rows?,
    );

    Ok(CompatibilityReport {
        analytic,
        finite_difference,
    })
}

/// Which pressure closes the momentum balance.
pub enum PressureSource<'a> {
    /// The family's printed formula.
    Printed,
    Reconstructed(&'a PressureReconstruction<'a>),
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentumReport {
    pub x_eq: ResidualReport,
    pub y_eq: ResidualReport,
}

/// Steady momentum residuals with the modified pressure assembled from the
/// chosen source; the p̂ gradient is taken by 4th-order finite differences,
/// everything else analytically.
pub fn momentum_residual(
    sol: &FlowSolution,
    grid: &Grid,
    source: &PressureSource,
    fd: &FdOptions,
) -> Result<MomentumReport, VerifyError> {
    grid.validate().map_err(|e| VerifyError::Grid(e.to_string()))?;
    let p = sol.fluid();
    let damping = p.h_factor() + p.mu_over_k();
    let (rho, mu, al) = (p.rho, p.mu, p.alpha1);

    let phat = |x: f64, y: f64| -> Result<Complex64, SolutionError> {
        match source {
            PressureSource::Printed => {
                let d = sol.derivs(x, y)?;
                let pr = sol
                    .printed_pressure(x, y)?
                    .ok_or_else(|| SolutionError::BadShape("no printed pressure".into()))?;
                Ok(pr + kinetic_correction(p, &d))
            }
            PressureSource::Reconstructed(rec) => rec.p_hat(x, y),
        }
    };
    if matches!(source, PressureSource::Printed) && sol.printed_pressure(0.0, 0.0)?.is_none() {
        return Err(VerifyError::NoPrintedPressure);
    }

    let h = fd.h_low;
    let grad = |x: f64, y: f64| -> Result<(Complex64, Complex64), SolutionError> {
        let c = [1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0];
        let off = [-2.0, -1.0, 1.0, 2.0];
        let mut gx = Complex64::new(0.0, 0.0);
        let mut gy = Complex64::new(0.0, 0.0);
        for (w, o) in c.iter().zip(off) {
            gx += *w * phat(x + o * h, y)?;
            gy += *w * phat(x, y + o * h)?;
        }
        Ok((gx / h, gy / h))
    };

    let pts = grid_points(grid);
    let rows: Result<Vec<_>, VerifyError> = pts
        .par_iter()
        .map(|&(x, y)| {
            let d = match sol.derivs(x, y) {
                Ok(d) => d,
                Err(e) if is_region_error(&e) => return Ok((x, y, None, None)),
                Err(e) => return Err(e.into()),
            };
            let (px, py) = match grad(x, y) {
                Ok(g) => g,
                Err(e) if is_region_error(&e) => return Ok((x, y, None, None)),
                Err(e) => return Err(e.into()),
            };
            let u = d.u();
            let v = d.v();
            let om = d.omega();
            let lap_u = d.d(2, 1) + d.d(0, 3);
            let lap_v = -(d.d(3, 0) + d.d(1, 2));
            let lap_om = -d.biharmonic();
            // x: phat_x - rho v om - mu lap_u + alpha1 v lap_om + damping u = 0
            let tx = [
                px,
                -rho * (v * om),
                -mu * lap_u,
                al * (v * lap_om),
                damping * u,
            ];
            // y: phat_y + rho u om - mu lap_v - alpha1 u lap_om + damping v = 0
            let ty = [
                py,
                rho * (u * om),
                -mu * lap_v,
                -al * (u * lap_om),
                damping * v,
            ];
            let nx = tx.iter().map(|t| t.norm()).fold(0.0, f64::max);
            let ny = ty.iter().map(|t| t.norm()).fold(0.0, f64::max);
            Ok((
                x,
                y,
                Some((tx.into_iter().sum::<Complex64>(), nx)),
                Some((ty.into_iter().sum::<Complex64>(), ny)),
            ))
        })
        .collect();
    let rows = rows?;
    let path = ResidualPath::fd(fd);
    let x_rows = rows.iter().map(|(x, y, tx, _)| (*x, *y, *tx)).collect();
    let y_rows = rows.iter().map(|(x, y, _, ty)| (*x, *y, *ty)).collect();
    Ok(MomentumReport {
        x_eq: ResidualReport::assemble(EquationTag::MomentumX, path, grid, x_rows),
        y_eq: ResidualReport::assemble(EquationTag::MomentumY, path, grid, y_rows),
    })
}

/// Continuity residual ∂u/∂x + ∂v/∂y along the analytic path. For fields
/// derived from a stream function this is exactly zero by construction.
pub fn continuity_residual(
    field: &dyn StreamField,
    grid: &Grid,
) -> Result<ResidualReport, VerifyError> {
    grid.validate().map_err(|e| VerifyError::Grid(e.to_string()))?;
    let pts = grid_points(grid);
    let rows: Result<Vec<_>, VerifyError> = pts
        .par_iter()
        .map(|&(x, y)| match field.derivs(x, y) {
            Ok(d) => {
                let ux = d.d(1, 1);
                let vy = -d.d(1, 1);
                let r = ux + vy;
                let norm = ux.norm().max(vy.norm());
                Ok((x, y, Some((r, norm))))
            }
            Err(e) if is_region_error(&e) => Ok((x, y, None)),
            Err(e) => Err(e.into()),
        })
        .collect();
    Ok(ResidualReport::assemble(
        EquationTag::Continuity,
        ResidualPath::Analytic,
        grid,
        rows?,
    ))
}
