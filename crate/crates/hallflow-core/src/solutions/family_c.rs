//! Riabouchinsky-plus-η family ψ = y·ξ(x) + η(x), σ = 1.
//!
//! With ξ constant (λ = 0) the once-integrated η-equation reduces to a
//! constant-coefficient second-order problem whose roots m₁, m₂ build η as a
//! sum of exponentials (`C1` and `C2s1`, identical structure, different
//! constants). With λ ≠ 0 the reduced equation is hypergeometric after
//! θ = e^x (`C2s2`): R(θ) is a combination of the two Frobenius solutions
//! θ^{m̄}·₂F₁(·,·;1±√(X₁²−4X₂);−λθ), and η follows by two quadratures with
//! zero integration constants from a configurable anchor.

use super::{ClosedFormY, PsiDerivs, SolutionError};
use crate::field::Projection;
use crate::params::{DerivedParams, FluidParams};
use crate::special::{hyp2f1, integrate, SeriesConfig, SpecialError};
use num_complex::Complex64;
use std::cell::RefCell;

use crate::solutions::config::FamilyTag;

#[derive(Debug, Clone)]
pub struct FamilyC {
    pub variant: CVariant,
    /// A₁ = [μ(1 − 1/K) − H]/(ρ − α₁); also the constant part of ξ.
    pub a1_coef: Complex64,
    pub p_ref: f64,
    pub fluid: FluidParams,
    pub derived: DerivedParams,
}

#[derive(Debug, Clone)]
pub enum CVariant {
    /// λ = 0 with the quadratic m² + cm + d = 0; amplitudes A₃..A₆.
    C1 {
        c: Complex64,
        d: Complex64,
        m1: Complex64,
        m2: Complex64,
        amps: [f64; 4],
    },
    /// λ = 0 written through X₁, X₂; amplitudes C₁..C₄.
    C2s1 {
        x1: Complex64,
        x2: Complex64,
        m1: Complex64,
        m2: Complex64,
        amps: [f64; 4],
    },
    /// λ ≠ 0, hypergeometric R(θ).
    C2s2(Box<HyperSubcase>),
}

#[derive(Debug, Clone)]
pub struct HyperSubcase {
    pub lambda_shape: f64,
    pub x1: Complex64,
    pub x2: Complex64,
    pub x3: Complex64,
    pub sqrt_disc: Complex64,
    pub c5_amp: f64,
    pub c1_amp: f64,
    /// Anchor x₀ for the zero-constant antiderivatives.
    pub anchor: f64,
    pub series: SeriesConfig,
    pub quad_tol: f64,
    // Frobenius data: exponent, 2F1 parameters per branch.
    pub s_plus: Complex64,
    pub a_plus: Complex64,
    pub b_plus: Complex64,
    pub c_plus: Complex64,
    pub s_minus: Complex64,
    pub a_minus: Complex64,
    pub b_minus: Complex64,
    pub c_minus: Complex64,
}

fn common_c(params: &FluidParams) -> Result<(DerivedParams, Complex64), SolutionError> {
    params.validate()?;
    let derived = params.derive()?;
    if params.alpha1 == 0.0 {
        return Err(SolutionError::FamilyInapplicable {
            reason: "family C requires alpha1 != 0".into(),
        });
    }
    let den = super::checked_denominator(params.rho, params.alpha1, 1.0)?;
    let a1 = (params.mu * (1.0 - params.permeability.inv()) - derived.h_factor) / den;
    if a1.norm() <= 1e-14 * (params.mu.abs().max(derived.h_factor.norm()).max(1.0)) {
        return Err(SolutionError::DegenerateCoefficient {
            reason: "K(mu - H) = mu makes A1 = 0 and the reduced equation singular".into(),
        });
    }
    Ok((derived, a1))
}

fn check_roots(
    m1: Complex64,
    m2: Complex64,
    lin: Complex64,
    con: Complex64,
    amps: &[f64],
) -> Result<(), SolutionError> {
    let scale = lin.norm().max(con.norm()).max(1.0);
    for m in [m1, m2] {
        let resid = (m * m + lin * m + con).norm();
        if resid > 1e-12 * scale {
            return Err(SolutionError::BadShape(format!(
                "quadratic root residual {resid:.3e} exceeds 1e-12 at m = {m}"
            )));
        }
    }
    for (amp, m) in amps.iter().zip([m1, m2]) {
        if *amp != 0.0 && (m * (m + 1.0)).norm() <= 1e-12 {
            return Err(SolutionError::DegenerateRoot { m });
        }
    }
    Ok(())
}

/// Case 1 of the y·ξ + η family: α₁ ≠ 0, σ = 1, λ = 0, constants A₃..A₆.
pub fn build_family_c1(
    params: &FluidParams,
    amps: [f64; 4],
    p_ref: f64,
) -> Result<super::FlowSolution, SolutionError> {
    let (derived, a1) = common_c(params)?;
    let al = params.alpha1;
    let c = (3.0 * al * a1 + params.mu) / (al * a1);
    let d = ((3.0 * al - params.rho) * a1 + 2.0 * params.mu) / (al * a1);
    let disc = (c * c - 4.0 * d).sqrt();
    let m1 = (-c - disc) / 2.0;
    let m2 = (-c + disc) / 2.0;
    check_roots(m1, m2, c, d, &amps[..2])?;
    Ok(super::FlowSolution::C(FamilyC {
        variant: CVariant::C1 { c, d, m1, m2, amps },
        a1_coef: a1,
        p_ref,
        fluid: *params,
        derived,
    }))
}

fn x_coeffs(params: &FluidParams, a1: Complex64) -> (Complex64, Complex64, Complex64) {
    let al = params.alpha1;
    let x1 = params.mu / (al * a1) + 3.0;
    let x2 = 2.0 * params.mu / (al * a1) + (3.0 * al - params.rho) / al;
    let x3 = Complex64::new((2.0 * al - params.rho) / al, 0.0);
    (x1, x2, x3)
}

/// Subcase 1: the λ = 0 solution written through X₁, X₂; constants C₁..C₄.
pub fn build_family_c2s1(
    params: &FluidParams,
    amps: [f64; 4],
    p_ref: f64,
) -> Result<super::FlowSolution, SolutionError> {
    let (derived, a1) = common_c(params)?;
    let (x1, x2, _) = x_coeffs(params, a1);
    let disc = (x1 * x1 - 4.0 * x2).sqrt();
    let m1 = (-x1 - disc) / 2.0;
    let m2 = (-x1 + disc) / 2.0;
    check_roots(m1, m2, x1, x2, &amps[..2])?;
    Ok(super::FlowSolution::C(FamilyC {
        variant: CVariant::C2s1 { x1, x2, m1, m2, amps },
        a1_coef: a1,
        p_ref,
        fluid: *params,
        derived,
    }))
}

fn is_nonpositive_integer(c: Complex64) -> bool {
    c.im.abs() < 1e-14 && c.re <= 1e-14 && (c.re - c.re.round()).abs() < 1e-12
}

/// Subcase 2 (general case): λ ≠ 0, hypergeometric R(θ).
#[allow(clippy::too_many_arguments)]
pub fn build_family_c2s2(
    params: &FluidParams,
    lambda_shape: f64,
    c5_amp: f64,
    c1_amp: f64,
    anchor: f64,
    p_ref: f64,
    series: SeriesConfig,
    quad_tol: f64,
) -> Result<super::FlowSolution, SolutionError> {
    let (derived, a1) = common_c(params)?;
    if lambda_shape == 0.0 || !lambda_shape.is_finite() {
        return Err(SolutionError::BadShape(
            "subcase 2 requires lambda != 0 (lambda = 0 is subcase 1)".into(),
        ));
    }
    series.validate()?;
    let (x1, x2, x3) = x_coeffs(params, a1);
    let sqrt_disc = (x1 * x1 - 4.0 * x2).sqrt();
    let sq1m = (Complex64::new(1.0, 0.0) - x3).sqrt();
    let s_minus = (-x1 - sqrt_disc) / 2.0;
    let s_plus = (-x1 + sqrt_disc) / 2.0;
    let half_plus = (2.0 - x1 + sqrt_disc) / 2.0;
    let half_minus = (2.0 - x1 - sqrt_disc) / 2.0;
    let hs = HyperSubcase {
        lambda_shape,
        x1,
        x2,
        x3,
        sqrt_disc,
        c5_amp,
        c1_amp,
        anchor,
        series,
        quad_tol,
        s_plus,
        a_plus: half_plus - sq1m,
        b_plus: half_plus + sq1m,
        c_plus: 1.0 + sqrt_disc,
        s_minus,
        a_minus: half_minus - sq1m,
        b_minus: half_minus + sq1m,
        c_minus: 1.0 - sqrt_disc,
    };
    if c5_amp != 0.0 && is_nonpositive_integer(hs.c_plus) {
        return Err(SpecialError::PoleAtNonpositiveC {
            c: hs.c_plus.to_string(),
        }
        .into());
    }
    if c1_amp != 0.0 && is_nonpositive_integer(hs.c_minus) {
        return Err(SpecialError::PoleAtNonpositiveC {
            c: hs.c_minus.to_string(),
        }
        .into());
    }
    Ok(super::FlowSolution::C(FamilyC {
        variant: CVariant::C2s2(Box::new(hs)),
        a1_coef: a1,
        p_ref,
        fluid: *params,
        derived,
    }))
}

impl HyperSubcase {
    /// k-th θ-derivative of θ^s·₂F₁(a,b;c;−λθ) by the Leibniz rule; the
    /// ₂F₁ derivatives are parameter shifts.
    fn branch_deriv(
        &self,
        s: Complex64,
        a: Complex64,
        b: Complex64,
        c: Complex64,
        theta: f64,
        k: usize,
    ) -> Result<Complex64, SolutionError> {
        let z = Complex64::new(-self.lambda_shape * theta, 0.0);
        let lnt = theta.ln();
        let mut out = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        for i in 0..=k {
            if i > 0 {
                binom *= (k - i + 1) as f64 / i as f64;
            }
            // falling factorial s(s-1)...(s-i+1)
            let mut fall = Complex64::new(1.0, 0.0);
            for q in 0..i {
                fall *= s - q as f64;
            }
            if fall.norm() == 0.0 {
                continue;
            }
            let m = k - i;
            // (a)_m (b)_m / (c)_m prefactor of the m-th 2F1 derivative
            let mut shift = Complex64::new(1.0, 0.0);
            for q in 0..m {
                shift *= (a + q as f64) * (b + q as f64) / (c + q as f64);
            }
            let f = hyp2f1(a + m as f64, b + m as f64, c + m as f64, z, &self.series)
                .map_err(|e| SolutionError::EvaluationRegion {
                    x: theta.ln(),
                    source: e,
                })?;
            let theta_pow = ((s - i as f64) * lnt).exp();
            out += binom * fall * theta_pow * (-self.lambda_shape).powi(m as i32) * shift * f;
        }
        Ok(out)
    }

    /// R and its θ-derivatives up to order `upto`.
    pub fn r_derivs(&self, theta: f64, upto: usize) -> Result<Vec<Complex64>, SolutionError> {
        let mut out = Vec::with_capacity(upto + 1);
        for k in 0..=upto {
            let mut v = Complex64::new(0.0, 0.0);
            if self.c5_amp != 0.0 {
                v += self.c5_amp
                    * self.branch_deriv(self.s_plus, self.a_plus, self.b_plus, self.c_plus, theta, k)?;
            }
            if self.c1_amp != 0.0 {
                v += self.c1_amp
                    * self.branch_deriv(
                        self.s_minus,
                        self.a_minus,
                        self.b_minus,
                        self.c_minus,
                        theta,
                        k,
                    )?;
            }
            out.push(v);
        }
        Ok(out)
    }

    fn quad_capture<F: Fn(f64) -> Result<Complex64, SolutionError>>(
        &self,
        f: F,
        from: f64,
        to: f64,
        tol: f64,
    ) -> Result<Complex64, SolutionError> {
        let captured: RefCell<Option<SolutionError>> = RefCell::new(None);
        let integrand = |t: f64| match f(t) {
            Ok(v) => v,
            Err(e) => {
                captured.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        };
        let result = integrate(&integrand, from, to, tol);
        if let Some(e) = captured.into_inner() {
            return Err(e);
        }
        Ok(result?)
    }

    /// P̄(x) = ∫ R(e^t) dt from the anchor, zero constant.
    pub fn p_bar(&self, x: f64) -> Result<Complex64, SolutionError> {
        self.quad_capture(|t| Ok(self.r_derivs(t.exp(), 0)?[0]), self.anchor, x, self.quad_tol)
    }

    /// η(x) = ∫ P̄(t)e^t dt from the anchor, zero constant.
    pub fn eta(&self, x: f64) -> Result<Complex64, SolutionError> {
        self.quad_capture(
            |t| Ok(self.p_bar(t)? * t.exp()),
            self.anchor,
            x,
            self.quad_tol * 10.0,
        )
    }
}

impl FamilyC {
    pub fn tag(&self) -> FamilyTag {
        match &self.variant {
            CVariant::C1 { .. } => FamilyTag::C1,
            CVariant::C2s1 { .. } => FamilyTag::C2s1,
            CVariant::C2s2(_) => FamilyTag::C2s2,
        }
    }

    /// η exponential terms (weight, rate) plus the additive constant, for
    /// the λ = 0 variants.
    fn eta_terms(&self) -> Option<([(Complex64, Complex64); 3], f64)> {
        let (m1, m2, amps) = match &self.variant {
            CVariant::C1 { m1, m2, amps, .. } => (*m1, *m2, *amps),
            CVariant::C2s1 { m1, m2, amps, .. } => (*m1, *m2, *amps),
            CVariant::C2s2(_) => return None,
        };
        Some((
            [
                (amps[0] / (m1 * (m1 + 1.0)), m1 + 1.0),
                (amps[1] / (m2 * (m2 + 1.0)), m2 + 1.0),
                (Complex64::new(amps[2], 0.0), Complex64::new(1.0, 0.0)),
            ],
            amps[3],
        ))
    }

    fn eta_derivative(&self, x: f64, order: usize) -> Result<Complex64, SolutionError> {
        match &self.variant {
            CVariant::C1 { .. } | CVariant::C2s1 { .. } => {
                let (terms, constant) = self.eta_terms().unwrap();
                let mut v = Complex64::new(0.0, 0.0);
                for (w, r) in terms {
                    let mut rp = Complex64::new(1.0, 0.0);
                    for _ in 0..order {
                        rp *= r;
                    }
                    v += w * rp * (r * x).exp();
                }
                if order == 0 {
                    v += constant;
                }
                Ok(v)
            }
            CVariant::C2s2(hs) => {
                if order == 0 {
                    return hs.eta(x);
                }
                // eta^{(n)} = (P_bar + sum_k c_{n,k} theta^k R^{(k)}) e^x with
                // c_{n+1,k} = (1+k) c_{n,k} + c_{n,k-1} + [k = 0]
                let theta = x.exp();
                let mut coef = [0.0f64; 5];
                for _ in 1..order {
                    let mut next = [0.0f64; 5];
                    for k in 0..5 {
                        next[k] = (1.0 + k as f64) * coef[k]
                            + if k > 0 { coef[k - 1] } else { 0.0 }
                            + if k == 0 { 1.0 } else { 0.0 };
                    }
                    coef = next;
                }
                let max_k = (order.saturating_sub(2)).min(4);
                let r = hs.r_derivs(theta, max_k)?;
                let mut bracket = hs.p_bar(x)?;
                let mut tpow = 1.0;
                for (k, rk) in r.iter().enumerate() {
                    bracket += coef[k] * tpow * rk;
                    tpow *= theta;
                }
                Ok(bracket * theta)
            }
        }
    }

    fn xi_derivative(&self, x: f64, order: usize) -> Complex64 {
        match &self.variant {
            CVariant::C1 { .. } | CVariant::C2s1 { .. } => {
                if order == 0 {
                    self.a1_coef
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            CVariant::C2s2(hs) => {
                let f = hs.lambda_shape * x.exp();
                if order == 0 {
                    self.a1_coef * (1.0 + f)
                } else {
                    self.a1_coef * f
                }
            }
        }
    }

    pub fn derivs(&self, x: f64, y: f64) -> Result<PsiDerivs, SolutionError> {
        let mut d = PsiDerivs::zero();
        for i in 0..6 {
            let xi_i = self.xi_derivative(x, i);
            d.set(i, 0, y * xi_i + self.eta_derivative(x, i)?);
            if i <= 4 {
                d.set(i, 1, xi_i);
            }
        }
        Ok(d)
    }

    pub fn growth_rates(&self) -> crate::solutions::GrowthRates {
        // psi = y xi(x) + eta(x): linear in y; mixed partials see only xi,
        // which is constant for the lambda = 0 variants and grows like e^x
        // in the hypergeometric subcase.
        let (pure_x, mixed_x) = match &self.variant {
            CVariant::C1 { m1, m2, .. } | CVariant::C2s1 { m1, m2, .. } => (
                (m1.re + 1.0).abs().max((m2.re + 1.0).abs()).max(1.0),
                0.0,
            ),
            CVariant::C2s2(hs) => (
                (hs.s_plus.re + 1.0)
                    .abs()
                    .max((hs.s_minus.re + 1.0).abs())
                    .max(1.0),
                1.0,
            ),
        };
        crate::solutions::GrowthRates {
            pure_x,
            pure_y: 0.0,
            mixed_x,
            mixed_y: 0.0,
        }
    }

    /// Printed pressure for the λ = 0 variants; the hypergeometric subcase
    /// has none in print.
    pub fn printed_pressure(&self, x: f64, _y: f64) -> Result<Option<Complex64>, SolutionError> {
        let (m1, m2, amps) = match &self.variant {
            CVariant::C1 { m1, m2, amps, .. } => (*m1, *m2, *amps),
            CVariant::C2s1 { m1, m2, amps, .. } => (*m1, *m2, *amps),
            CVariant::C2s2(_) => return Ok(None),
        };
        let (q1, q2, q3) = (amps[0], amps[1], amps[2]);
        let rho = self.fluid.rho;
        let al = self.fluid.alpha1;
        let a1 = self.a1_coef;
        let two = Complex64::new(2.0, 0.0);
        let e = |r: Complex64| (r * x).exp();
        let bracket = q1 * q1 / (m1 * m1) * e(two * (1.0 + m1))
            + 2.0 * q1 * q2 / (m1 * m2) * e(2.0 + m1 + m2)
            + q2 * q2 / (m2 * m2) * e(two * (1.0 + m2))
            + q3 * q3 * e(two)
            + 2.0 * q1 * q3 * (2.0 + 3.0 * m1 + m1 * m1) / ((2.0 + m1) * m1) * e(2.0 + m1)
            + 2.0 * q2 * q3 * (2.0 + 3.0 * m2 + m2 * m2) / ((2.0 + m2) * m2) * e(2.0 + m2);
        Ok(Some(
            Complex64::new(self.p_ref, 0.0) - 0.5 * rho * (a1 * a1) + al * bracket,
        ))
    }

    pub fn streamline(
        &self,
        omega: f64,
        x: f64,
        proj: Projection,
    ) -> Result<ClosedFormY, SolutionError> {
        if matches!(self.variant, CVariant::C2s2(_)) {
            return Err(SolutionError::NoClosedForm);
        }
        let eps1 = proj.apply(self.a1_coef);
        if eps1.abs() < 1e-300 {
            return Err(SolutionError::NoClosedFormProjection {
                reason: "projected eps1 vanishes".into(),
            });
        }
        let eta = proj.apply(self.eta_derivative(x, 0)?);
        Ok(ClosedFormY::Point((omega - eta) / eps1))
    }
}
