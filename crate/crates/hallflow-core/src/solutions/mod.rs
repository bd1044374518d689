//! The exact solution families: construction (with their solvability gates),
//! complex field evaluation, analytic derivatives, printed pressure
//! formulas, and closed-form streamline inversions.
//!
//! Families:
//! * `A1`/`A2`/`A3` — ψ = ξ(x) + η(y) with exponential shape functions; the
//!   three cases of the wave-number constraint (b = a, b = −a, and
//!   b² ≠ a² under ρ = α₁(a² + b²)).
//! * `B`  — Riabouchinsky flow ψ = y·ξ(x), ξ = δ(1 + λe^{σx}).
//! * `C1`, `C2s1` — ψ = y·ξ(x) + η(x) with ξ constant and η a sum of
//!   exponentials from the reduced second-order equation.
//! * `C2s2` — the general Riabouchinsky-plus-η case whose reduced equation
//!   is hypergeometric; η comes from quadrature of the ₂F₁ solution.

mod config;
mod family_a;
mod family_b;
mod family_c;

pub use config::{FamilyTag, ShapeConstants, SolutionConfig};
pub use family_a::CaseA;

use crate::params::{DerivedParams, FluidParams, ParamError};
use crate::special::{QuadError, SpecialError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolutionError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("resonant denominator: rho = alpha1 * k^2 (rho = {rho}, alpha1 = {alpha1}, k = {wavenumber})")]
    ResonantDenominator {
        rho: f64,
        alpha1: f64,
        wavenumber: f64,
    },
    #[error("wave number {name} must be nonzero and finite")]
    BadWavenumber { name: &'static str },
    #[error("shape constants inconsistent with case {case}: {detail}")]
    CaseShapeMismatch { case: &'static str, detail: String },
    #[error("Case 3 requires rho = alpha1*(a^2 + b^2): rho = {rho} but alpha1*(a^2+b^2) = {product}")]
    ConstraintViolation { rho: f64, product: f64 },
    #[error("family inapplicable: {reason}")]
    FamilyInapplicable { reason: String },
    #[error("degenerate coefficient: {reason}")]
    DegenerateCoefficient { reason: String },
    #[error("degenerate root m = {m} with m(1+m) = 0 divides the eta formula")]
    DegenerateRoot { m: Complex64 },
    #[error("no closed-form streamline for this family")]
    NoClosedForm,
    #[error("no closed-form streamline in this projection: {reason}")]
    NoClosedFormProjection { reason: String },
    #[error("evaluation outside the supported hypergeometric region at x = {x}: {source}")]
    EvaluationRegion { x: f64, source: SpecialError },
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("invalid shape constants: {0}")]
    BadShape(String),
}

/// All partial derivatives ∂^{i+j}ψ/∂xⁱ∂yʲ for i + j ≤ 5, complex.
#[derive(Debug, Clone, Copy)]
pub struct PsiDerivs {
    d: [[Complex64; 6]; 6],
}

impl PsiDerivs {
    pub fn zero() -> Self {
        PsiDerivs {
            d: [[Complex64::new(0.0, 0.0); 6]; 6],
        }
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> Complex64 {
        self.d[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.d[i][j] = v;
    }

    pub fn psi(&self) -> Complex64 {
        self.d[0][0]
    }

    /// u = ∂ψ/∂y.
    pub fn u(&self) -> Complex64 {
        self.d[0][1]
    }

    /// v = −∂ψ/∂x.
    pub fn v(&self) -> Complex64 {
        -self.d[1][0]
    }

    pub fn laplacian(&self) -> Complex64 {
        self.d[2][0] + self.d[0][2]
    }

    /// ω = −∇²ψ.
    pub fn omega(&self) -> Complex64 {
        -self.laplacian()
    }

    pub fn laplacian_x(&self) -> Complex64 {
        self.d[3][0] + self.d[1][2]
    }

    pub fn laplacian_y(&self) -> Complex64 {
        self.d[2][1] + self.d[0][3]
    }

    pub fn biharmonic(&self) -> Complex64 {
        self.d[4][0] + 2.0 * self.d[2][2] + self.d[0][4]
    }

    pub fn biharmonic_x(&self) -> Complex64 {
        self.d[5][0] + 2.0 * self.d[3][2] + self.d[1][4]
    }

    pub fn biharmonic_y(&self) -> Complex64 {
        self.d[4][1] + 2.0 * self.d[2][3] + self.d[0][5]
    }
}

/// Complex field values at a point. `p` is the family's printed pressure
/// formula; `None` for the hypergeometric subcase, which has none.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub psi: Complex64,
    pub u: Complex64,
    pub v: Complex64,
    pub p: Option<Complex64>,
    pub omega: Complex64,
}

/// Real view of a [`FieldSample`] under a projection.
#[derive(Debug, Clone, Copy)]
pub struct ProjectedSample {
    pub psi: f64,
    pub u: f64,
    pub v: f64,
    pub p: Option<f64>,
    pub omega: f64,
}

impl FieldSample {
    pub fn project(&self, proj: crate::field::Projection) -> ProjectedSample {
        ProjectedSample {
            psi: proj.apply(self.psi),
            u: proj.apply(self.u),
            v: proj.apply(self.v),
            p: self.p.map(|p| proj.apply(p)),
            omega: proj.apply(self.omega),
        }
    }
}

/// Result of a closed-form streamline query at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormY {
    Point(f64),
    /// The Lambert-W argument fell below −1/e (or the degenerate logarithm
    /// had no real solution): the level curve does not continue here.
    BranchTerminated,
}

/// Exponential growth bounds of a field, per axis and per derivative
/// sector. Finite-difference oracles use them only to choose step sizes
/// (truncation needs rate·h small; cancellation noise needs h large, so an
/// axis with no exponential content should advertise rate 0). `pure_*`
/// bounds the pure derivatives ∂ⁿ/∂xⁿ and ∂ⁿ/∂yⁿ; `mixed_*` bounds the
/// respective axis inside mixed partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRates {
    pub pure_x: f64,
    pub pure_y: f64,
    pub mixed_x: f64,
    pub mixed_y: f64,
}

impl Default for GrowthRates {
    fn default() -> Self {
        GrowthRates {
            pure_x: 1.0,
            pure_y: 1.0,
            mixed_x: 1.0,
            mixed_y: 1.0,
        }
    }
}

/// Anything that can hand out a stream function and its analytic
/// derivatives; implemented by [`FlowSolution`] and by the injected
/// counterexample fields of the verification engine.
pub trait StreamField: Sync {
    fn psi(&self, x: f64, y: f64) -> Result<Complex64, SolutionError>;
    fn derivs(&self, x: f64, y: f64) -> Result<PsiDerivs, SolutionError>;
    fn growth_rates(&self) -> GrowthRates {
        GrowthRates::default()
    }
}

/// One exact solution, immutable after construction; evaluation is pure.
#[derive(Debug, Clone)]
pub enum FlowSolution {
    A(family_a::FamilyA),
    B(family_b::FamilyB),
    C(family_c::FamilyC),
}

impl FlowSolution {
    pub fn fluid(&self) -> &FluidParams {
        match self {
            FlowSolution::A(f) => &f.fluid,
            FlowSolution::B(f) => &f.fluid,
            FlowSolution::C(f) => &f.fluid,
        }
    }

    pub fn derived(&self) -> &DerivedParams {
        match self {
            FlowSolution::A(f) => &f.derived,
            FlowSolution::B(f) => &f.derived,
            FlowSolution::C(f) => &f.derived,
        }
    }

    pub fn family_tag(&self) -> FamilyTag {
        match self {
            FlowSolution::A(f) => match f.case {
                CaseA::Case1 => FamilyTag::A1,
                CaseA::Case2 => FamilyTag::A2,
                CaseA::Case3 | CaseA::Unconstrained => FamilyTag::A3,
            },
            FlowSolution::B(_) => FamilyTag::B,
            FlowSolution::C(f) => f.tag(),
        }
    }

    /// Evaluate ψ, u, v, ω (analytic) and the printed pressure at a point.
    pub fn eval_field(&self, x: f64, y: f64) -> Result<FieldSample, SolutionError> {
        if !x.is_finite() || !y.is_finite() {
            return Err(SolutionError::BadShape(format!(
                "evaluation point ({x}, {y}) is not finite"
            )));
        }
        let d = self.derivs(x, y)?;
        let p = self.printed_pressure(x, y)?;
        Ok(FieldSample {
            psi: d.psi(),
            u: d.u(),
            v: d.v(),
            p,
            omega: d.omega(),
        })
    }

    /// The family's printed pressure formula, evaluated verbatim.
    /// `None` for the hypergeometric subcase.
    pub fn printed_pressure(&self, x: f64, y: f64) -> Result<Option<Complex64>, SolutionError> {
        match self {
            FlowSolution::A(f) => Ok(Some(f.printed_pressure(x, y))),
            FlowSolution::B(f) => Ok(Some(f.printed_pressure(x, y))),
            FlowSolution::C(f) => f.printed_pressure(x, y),
        }
    }

    /// Closed-form streamline y(x; Ω) in a linear projection of the field.
    ///
    /// Errors with [`SolutionError::NoClosedForm`] for the hypergeometric
    /// subcase and [`SolutionError::NoClosedFormProjection`] for the modulus
    /// projection (|ψ| does not share the families' functional form).
    pub fn streamline_closed_form(
        &self,
        omega_level: f64,
        x: f64,
        proj: crate::field::Projection,
    ) -> Result<ClosedFormY, SolutionError> {
        if matches!(proj, crate::field::Projection::Modulus) {
            return Err(SolutionError::NoClosedFormProjection {
                reason: "modulus projection is not linear in the field coefficients".into(),
            });
        }
        match self {
            FlowSolution::A(f) => f.streamline(omega_level, x, proj),
            FlowSolution::B(f) => f.streamline(omega_level, x, proj),
            FlowSolution::C(f) => f.streamline(omega_level, x, proj),
        }
    }
}

impl StreamField for FlowSolution {
    fn psi(&self, x: f64, y: f64) -> Result<Complex64, SolutionError> {
        Ok(self.derivs(x, y)?.psi())
    }

    fn derivs(&self, x: f64, y: f64) -> Result<PsiDerivs, SolutionError> {
        match self {
            FlowSolution::A(f) => Ok(f.derivs(x, y)),
            FlowSolution::B(f) => Ok(f.derivs(x, y)),
            FlowSolution::C(f) => f.derivs(x, y),
        }
    }

    fn growth_rates(&self) -> GrowthRates {
        match self {
            // psi = Ax + Cy + B e^{ax} + D e^{by}: no xy coupling at all
            FlowSolution::A(f) => GrowthRates {
                pure_x: if f.b_amp != 0.0 { f.a.abs() } else { 0.0 },
                pure_y: if f.d_amp != 0.0 { f.b.abs() } else { 0.0 },
                mixed_x: 0.0,
                mixed_y: 0.0,
            },
            // psi = y xi(x): linear in y; mixed partials carry xi'
            FlowSolution::B(f) => GrowthRates {
                pure_x: f.sigma_exp.abs(),
                pure_y: 0.0,
                mixed_x: f.sigma_exp.abs(),
                mixed_y: 0.0,
            },
            FlowSolution::C(f) => f.growth_rates(),
        }
    }
}

/// Relative closeness used by construction gates.
pub(crate) fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

pub(crate) fn checked_denominator(
    rho: f64,
    alpha1: f64,
    k: f64,
) -> Result<f64, SolutionError> {
    let den = rho - alpha1 * k * k;
    if den.abs() <= 1e-14 * rho.abs().max((alpha1 * k * k).abs()) {
        return Err(SolutionError::ResonantDenominator {
            rho,
            alpha1,
            wavenumber: k,
        });
    }
    Ok(den)
}

pub use family_a::{build_family_a, build_family_a_unconstrained};
pub use family_b::build_family_b;
pub use family_c::{build_family_c1, build_family_c2s1, build_family_c2s2, CVariant};
