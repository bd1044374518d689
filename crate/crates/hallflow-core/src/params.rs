//! Material constants, field constants and the derived parameter set shared
//! by every solution family.
//!
//! All derived quantities that can become complex (the Hall factor `H` and
//! its density-scaled form `χ`) are always stored complex, with imaginary
//! part zero when the Hall parameter vanishes, so downstream evaluation has
//! a single numeric path.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Porous-medium permeability; `Infinite` removes Darcy drag exactly
/// (the `μ/K` terms evaluate to 0.0, no epsilon involved).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Permeability {
    Finite(f64),
    Infinite,
}

impl Permeability {
    /// `1/K`, exactly zero for the infinite case.
    pub fn inv(self) -> f64 {
        match self {
            Permeability::Finite(k) => 1.0 / k,
            Permeability::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Permeability::Infinite)
    }
}

impl Serialize for Permeability {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Permeability::Finite(k) => s.serialize_f64(*k),
            Permeability::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Permeability {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(k) => Ok(Permeability::Finite(k)),
            Raw::Str(s) if s == "inf" || s == "Infinity" => Ok(Permeability::Infinite),
            Raw::Str(s) => Err(D::Error::custom(format!(
                "permeability must be a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("invalid density rho = {0}; mass density must be strictly positive")]
    InvalidDensity(f64),
    #[error("{name} = {value} violates {requirement}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("{name} is not finite")]
    NonFinite { name: &'static str },
}

/// Primitive material and field constants.
///
/// `conductivity` is the electrical conductivity; the exponent of the
/// Riabouchinsky shape function is a per-family constant named `sigma_exp`
/// elsewhere, so the two classical uses of the symbol σ never collide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    pub rho: f64,
    pub mu: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub permeability: Permeability,
    pub conductivity: f64,
    pub b0: f64,
    /// Hall parameter φ = ωₑτₑ (dimensionless).
    pub hall: f64,
}

/// Thermodynamic classification of the material constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThermoClass {
    /// μ ≥ 0, α₁ ≥ 0 and α₁ + α₂ = 0 all hold.
    Compatible,
    /// α₁ < 0, the sign reported by viscometric experiments.
    ExperimentalSign,
    /// α₁ + α₂ ≠ 0.
    CrossViscosityViolation,
}

impl FluidParams {
    /// σB₀², the only combination the flow equations see.
    pub fn sigma_b0_sq(&self) -> f64 {
        self.conductivity * self.b0 * self.b0
    }

    /// μ/K with the infinite-permeability case exact.
    pub fn mu_over_k(&self) -> f64 {
        self.mu * self.permeability.inv()
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        for (name, v) in [
            ("rho", self.rho),
            ("mu", self.mu),
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("conductivity", self.conductivity),
            ("b0", self.b0),
            ("hall", self.hall),
        ] {
            if !v.is_finite() {
                return Err(ParamError::NonFinite { name });
            }
        }
        if self.rho <= 0.0 {
            return Err(ParamError::InvalidDensity(self.rho));
        }
        for (name, v, req) in [
            ("mu", self.mu, "mu >= 0"),
            ("conductivity", self.conductivity, "conductivity >= 0"),
            ("b0", self.b0, "b0 >= 0"),
            ("hall", self.hall, "hall >= 0"),
        ] {
            if v < 0.0 {
                return Err(ParamError::OutOfRange {
                    name,
                    value: v,
                    requirement: req,
                });
            }
        }
        if let Permeability::Finite(k) = self.permeability {
            if !(k > 0.0) || !k.is_finite() {
                return Err(ParamError::OutOfRange {
                    name: "permeability",
                    value: k,
                    requirement: "K > 0 or infinite",
                });
            }
        }
        Ok(())
    }

    /// Classify the constants against the thermodynamic restrictions.
    /// Never rejects; both signs of α₁ are admitted as inputs.
    pub fn thermodynamic_class(&self) -> ThermoClass {
        if self.mu >= 0.0 && self.alpha1 >= 0.0 && self.alpha1 + self.alpha2 == 0.0 {
            ThermoClass::Compatible
        } else if self.alpha1 < 0.0 {
            ThermoClass::ExperimentalSign
        } else {
            ThermoClass::CrossViscosityViolation
        }
    }

    /// Complex Hall factor H = σB₀²(1 + iφ)/(1 + φ²).
    pub fn h_factor(&self) -> Complex64 {
        let phi = self.hall;
        Complex64::new(1.0, phi) * (self.sigma_b0_sq() / (1.0 + phi * phi))
    }

    pub fn derive(&self) -> Result<DerivedParams, ParamError> {
        derive(self)
    }
}

/// Ratio constants derived from [`FluidParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Kinematic viscosity ν = μ/ρ.
    pub nu: f64,
    /// Second-grade parameter Λ = α₁/ρ.
    pub lambda_sg: f64,
    /// MHD parameter N = σB₀²/ρ.
    pub n_mhd: f64,
    /// χ = N(1 + iφ)/(1 + φ²); equals H/ρ.
    pub chi: Complex64,
    /// H = σB₀²(1 + iφ)/(1 + φ²).
    pub h_factor: Complex64,
}

/// Compute the derived constants. Fails only on a non-positive density.
pub fn derive(p: &FluidParams) -> Result<DerivedParams, ParamError> {
    if !(p.rho > 0.0) || !p.rho.is_finite() {
        return Err(ParamError::InvalidDensity(p.rho));
    }
    let h = p.h_factor();
    Ok(DerivedParams {
        nu: p.mu / p.rho,
        lambda_sg: p.alpha1 / p.rho,
        n_mhd: p.sigma_b0_sq() / p.rho,
        chi: h / p.rho,
        h_factor: h,
    })
}

/// JSON face of [`FluidParams`].
///
/// Accepts `{rho, mu, alpha1, alpha2, K, phi}` together with either
/// `sigma_b0_sq` or a `(sigma, b0)` pair; `"K": "inf"` selects infinite
/// permeability.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FluidParamsConfig {
    pub rho: f64,
    pub mu: f64,
    pub alpha1: f64,
    #[serde(default)]
    pub alpha2: f64,
    #[serde(rename = "K")]
    pub permeability: Permeability,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_b0_sq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<f64>,
    #[serde(default)]
    pub phi: f64,
}

impl FluidParamsConfig {
    pub fn build(&self) -> Result<FluidParams, ParamError> {
        let (conductivity, b0) = match (self.sigma_b0_sq, self.sigma, self.b0) {
            (Some(sb), None, None) => (sb, 1.0),
            (None, Some(s), Some(b)) => (s, b),
            (None, None, None) => (0.0, 0.0),
            _ => {
                return Err(ParamError::OutOfRange {
                    name: "sigma_b0_sq",
                    value: f64::NAN,
                    requirement: "exactly one of sigma_b0_sq or (sigma, b0)",
                })
            }
        };
        let p = FluidParams {
            rho: self.rho,
            mu: self.mu,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            permeability: self.permeability,
            conductivity,
            b0,
            hall: self.phi,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_params(p: &FluidParams) -> Self {
        FluidParamsConfig {
            rho: p.rho,
            mu: p.mu,
            alpha1: p.alpha1,
            alpha2: p.alpha2,
            permeability: p.permeability,
            sigma_b0_sq: None,
            sigma: Some(p.conductivity),
            b0: Some(p.b0),
            phi: p.hall,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn base() -> FluidParams {
        FluidParams {
            rho: 1.0,
            mu: 0.5,
            alpha1: 0.1,
            alpha2: -0.1,
            permeability: Permeability::Finite(0.1),
            conductivity: 0.0,
            b0: 0.0,
            hall: 0.1,
        }
    }

    #[test]
    fn derive_figure1_constants() {
        let d = base().derive().unwrap();
        assert_eq!(d.nu, 0.5);
        assert_eq!(d.lambda_sg, 0.1);
        assert_eq!(d.n_mhd, 0.0);
        assert_eq!(d.chi, Complex64::new(0.0, 0.0));
        assert_eq!(d.h_factor, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn hall_zero_gives_real_h() {
        let mut p = base();
        p.conductivity = 1.0;
        p.b0 = 1.0;
        p.hall = 0.0;
        let d = p.derive().unwrap();
        assert_eq!(d.h_factor, Complex64::new(1.0, 0.0));
        assert_eq!(d.h_factor.im, 0.0);
    }

    #[test]
    fn hall_one_splits_h() {
        let mut p = base();
        p.conductivity = 1.0;
        p.b0 = 1.0;
        p.hall = 1.0;
        let d = p.derive().unwrap();
        assert_relative_eq!(d.h_factor.re, 0.5, max_relative = 1e-15);
        assert_relative_eq!(d.h_factor.im, 0.5, max_relative = 1e-15);
        // |H| = sigma B0^2 / sqrt(1 + phi^2)
        assert_relative_eq!(d.h_factor.norm(), 1.0 / 2f64.sqrt(), max_relative = 1e-15);
        // H = rho * chi exactly
        assert_eq!(d.h_factor, d.chi * p.rho);
    }

    #[test]
    fn zero_density_rejected() {
        let mut p = base();
        p.rho = 0.0;
        assert!(matches!(p.derive(), Err(ParamError::InvalidDensity(_))));
    }

    #[test]
    fn thermo_classification() {
        let p = base();
        assert_eq!(p.thermodynamic_class(), ThermoClass::Compatible);

        let mut q = base();
        q.alpha1 = -0.5;
        q.alpha2 = 0.5;
        assert_eq!(q.thermodynamic_class(), ThermoClass::ExperimentalSign);

        let mut r = base();
        r.alpha1 = 0.1;
        r.alpha2 = 0.3;
        assert_eq!(r.thermodynamic_class(), ThermoClass::CrossViscosityViolation);
    }

    #[test]
    fn infinite_permeability_is_exact_zero_drag() {
        let mut p = base();
        p.permeability = Permeability::Infinite;
        assert_eq!(p.mu_over_k(), 0.0);
    }

    #[test]
    fn json_round_trip_and_inf() {
        let cfg: FluidParamsConfig = serde_json::from_str(
            r#"{"rho":1.0,"mu":0.5,"alpha1":0.1,"alpha2":-0.1,"K":"inf","sigma_b0_sq":0.5,"phi":1.0}"#,
        )
        .unwrap();
        let p = cfg.build().unwrap();
        assert!(p.permeability.is_infinite());
        assert_eq!(p.sigma_b0_sq(), 0.5);

        let cfg2: FluidParamsConfig =
            serde_json::from_str(r#"{"rho":2.0,"mu":1.0,"alpha1":0.0,"K":0.1,"sigma":2.0,"b0":3.0}"#)
                .unwrap();
        let p2 = cfg2.build().unwrap();
        assert_eq!(p2.sigma_b0_sq(), 18.0);
    }
}
