//! Deliberate non-solution fields used to prove the residual engine is not
//! vacuous.

use crate::solutions::{PsiDerivs, SolutionError, StreamField};
use num_complex::Complex64;

/// Analytic counterexample fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectedField {
    /// ψ = x²y², which satisfies no steady compatibility balance.
    XSqYSq,
}

impl std::str::FromStr for InjectedField {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "x2y2" => Ok(InjectedField::XSqYSq),
            other => Err(format!("unknown injected field {other:?} (try \"x2y2\")")),
        }
    }
}

impl StreamField for InjectedField {
    fn psi(&self, x: f64, y: f64) -> Result<Complex64, SolutionError> {
        Ok(Complex64::new(x * x * y * y, 0.0))
    }

    fn derivs(&self, x: f64, y: f64) -> Result<PsiDerivs, SolutionError> {
        // psi = f(x) g(y) with f = x^2: derivative ladders [t^2, 2t, 2, 0, ...]
        let ladder = |t: f64| [t * t, 2.0 * t, 2.0, 0.0, 0.0, 0.0];
        let fx = ladder(x);
        let gy = ladder(y);
        let mut d = PsiDerivs::zero();
        for i in 0..6 {
            for j in 0..6 - i {
                d.set(i, j, Complex64::new(fx[i] * gy[j], 0.0));
            }
        }
        Ok(d)
    }
}
