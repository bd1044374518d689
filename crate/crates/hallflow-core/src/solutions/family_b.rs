//! Riabouchinsky family ψ = y·ξ(x) with ξ(x) = δ(1 + λe^{σx}) and
//! δ = [μσ − (H + μ/K)/σ]/(ρ − α₁σ²).

use super::{checked_denominator, ClosedFormY, PsiDerivs, SolutionError};
use crate::field::Projection;
use crate::params::{DerivedParams, FluidParams};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct FamilyB {
    pub sigma_exp: f64,
    pub lambda_shape: f64,
    /// δ of the shape function, complex through the Hall factor.
    pub delta_amp: Complex64,
    pub p_ref: f64,
    pub fluid: FluidParams,
    pub derived: DerivedParams,
}

pub fn build_family_b(
    params: &FluidParams,
    sigma_exp: f64,
    lambda_shape: f64,
    p_ref: f64,
) -> Result<super::FlowSolution, SolutionError> {
    params.validate()?;
    let derived = params.derive()?;
    if sigma_exp == 0.0 || !sigma_exp.is_finite() {
        return Err(SolutionError::BadWavenumber { name: "sigma_exp" });
    }
    if !lambda_shape.is_finite() {
        return Err(SolutionError::BadShape("lambda_shape not finite".into()));
    }
    let den = checked_denominator(params.rho, params.alpha1, sigma_exp)?;
    let delta_amp =
        (params.mu * sigma_exp - (derived.h_factor + params.mu_over_k()) / sigma_exp) / den;
    Ok(super::FlowSolution::B(FamilyB {
        sigma_exp,
        lambda_shape,
        delta_amp,
        p_ref,
        fluid: *params,
        derived,
    }))
}

impl FamilyB {
    fn shape(&self, x: f64) -> (f64, f64) {
        let f = self.lambda_shape * (self.sigma_exp * x).exp();
        (1.0 + f, f)
    }

    pub fn derivs(&self, x: f64, y: f64) -> PsiDerivs {
        let mut d = PsiDerivs::zero();
        let (one_plus_f, f) = self.shape(x);
        let del = self.delta_amp;
        d.set(0, 0, del * (y * one_plus_f));
        d.set(0, 1, del * one_plus_f);
        let mut spow = 1.0;
        for n in 1..6 {
            spow *= self.sigma_exp;
            d.set(n, 0, del * (y * spow * f));
            if n <= 4 {
                d.set(n, 1, del * (spow * f));
            }
        }
        d
    }

    /// Printed pressure, kept verbatim.
    pub fn printed_pressure(&self, x: f64, y: f64) -> Complex64 {
        let s = self.sigma_exp;
        let lam = self.lambda_shape;
        let rho = self.fluid.rho;
        let al = self.fluid.alpha1;
        let mu = self.fluid.mu;
        let abar = self.delta_amp;
        let esx = (s * x).exp();
        let e2sx = (2.0 * s * x).exp();
        let ab2 = abar * abar;
        Complex64::new(self.p_ref, 0.0)
            + mu * s * abar * ((1.0 - s * s * y * y / 2.0) * lam * esx)
            - 0.5 * rho * (ab2 * (1.0 - lam * lam * e2sx))
            + al * (ab2 * (s * s * lam * esx)
                + ab2 * (s * s * lam * lam * (3.0 + s * s * y * y / 2.0) * e2sx))
    }

    pub fn streamline(
        &self,
        omega: f64,
        x: f64,
        proj: Projection,
    ) -> Result<ClosedFormY, SolutionError> {
        let eps = proj.apply(self.delta_amp);
        let (one_plus_f, _) = self.shape(x);
        let den = one_plus_f * eps;
        if den.abs() < 1e-300 {
            return Ok(ClosedFormY::BranchTerminated);
        }
        Ok(ClosedFormY::Point(omega / den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Permeability;
    use crate::solutions::FlowSolution;
    use approx::assert_relative_eq;

    fn fig6_params() -> FluidParams {
        FluidParams {
            rho: 1.0,
            mu: 0.5,
            alpha1: 0.1,
            alpha2: -0.1,
            permeability: Permeability::Finite(15.0),
            conductivity: 0.0,
            b0: 0.0,
            hall: 0.0,
        }
    }

    #[test]
    fn figure6_delta() {
        // delta = (0.5 - 0.5/15)/0.9 = 14/27
        let sol = build_family_b(&fig6_params(), 1.0, 1.0, 0.0).unwrap();
        let FlowSolution::B(f) = &sol else { panic!() };
        assert_relative_eq!(f.delta_amp.re, 14.0 / 27.0, max_relative = 1e-14);
        assert_eq!(f.delta_amp.im, 0.0);
    }

    #[test]
    fn limiting_delta_is_nu() {
        let p = FluidParams {
            rho: 2.0,
            mu: 1.0,
            alpha1: 0.0,
            alpha2: 0.0,
            permeability: Permeability::Infinite,
            conductivity: 0.0,
            b0: 0.0,
            hall: 0.0,
        };
        let sol = build_family_b(&p, 1.0, 0.5, 0.0).unwrap();
        let FlowSolution::B(f) = &sol else { panic!() };
        assert_eq!(f.delta_amp.re, 0.5); // nu = mu/rho
    }

    #[test]
    fn lambda_zero_uniform_flow() {
        let sol = build_family_b(&fig6_params(), 1.0, 0.0, 0.0).unwrap();
        let FlowSolution::B(f) = &sol else { panic!() };
        let s = sol.eval_field(0.7, -1.3).unwrap();
        assert_eq!(s.u, f.delta_amp);
        assert_eq!(s.v, Complex64::new(0.0, 0.0));
        assert_eq!(s.psi, f.delta_amp * -1.3);
    }

    #[test]
    fn streamline_matches_functional_form() {
        // y = Omega/((1 + lambda e^{sigma x}) eps); at x = 0, Omega = 15:
        // y = 15/(2 eps) = 15*27/28
        let sol = build_family_b(&fig6_params(), 1.0, 1.0, 0.0).unwrap();
        match sol.streamline_closed_form(15.0, 0.0, Projection::Real).unwrap() {
            ClosedFormY::Point(y) => {
                assert_relative_eq!(y, 15.0 * 27.0 / 28.0, max_relative = 1e-14);
                let psi = sol.eval_field(0.0, y).unwrap().psi.re;
                assert_relative_eq!(psi, 15.0, max_relative = 1e-12);
            }
            _ => panic!("expected point"),
        }
    }

    #[test]
    fn resonance_rejected() {
        let mut p = fig6_params();
        p.alpha1 = 1.0;
        assert!(matches!(
            build_family_b(&p, 1.0, 1.0, 0.0),
            Err(SolutionError::ResonantDenominator { .. })
        ));
    }
}
