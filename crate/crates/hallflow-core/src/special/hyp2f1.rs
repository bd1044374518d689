//! Gauss hypergeometric function ₂F₁(a, b; c; z) for complex parameters.
//!
//! Direct series with running-product Pochhammer ratios in the core region
//! |z| ≤ 0.5; one Pfaff transformation z → z/(z−1) where it shrinks the
//! argument. Arguments outside that scope are rejected rather than
//! extrapolated, and real arguments on the cut [1, ∞) are rejected outright.

use super::{SeriesConfig, SpecialError};
use num_complex::Complex64;

fn is_nonpositive_integer(c: Complex64) -> bool {
    c.im.abs() < 1e-14 && c.re <= 1e-14 && (c.re - c.re.round()).abs() < 1e-12
}

/// Plain series Σ (a)ₖ(b)ₖ/(c)ₖ · zᵏ/k!; caller guarantees convergence.
fn series(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    cfg: &SeriesConfig,
) -> Result<Complex64, SpecialError> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last_ratio = f64::INFINITY;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        // if a or b hits a non-positive integer the series terminates exactly
        let num = (a + kf) * (b + kf);
        if num.norm() == 0.0 {
            return Ok(sum);
        }
        term *= num * z / ((c + kf) * (kf + 1.0));
        sum += term;
        last_ratio = term.norm() / sum.norm().max(f64::MIN_POSITIVE);
        if last_ratio <= cfg.tol && k > 1 {
            return Ok(sum);
        }
    }
    Err(SpecialError::Convergence {
        max_terms: cfg.max_terms,
        last_ratio,
    })
}

/// Evaluate ₂F₁(a, b; c; z).
pub fn hyp2f1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    cfg: &SeriesConfig,
) -> Result<Complex64, SpecialError> {
    cfg.validate()?;
    if is_nonpositive_integer(c) {
        return Err(SpecialError::PoleAtNonpositiveC { c: c.to_string() });
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(SpecialError::BranchCut { z: z.to_string() });
    }
    let r = z.norm();
    if r <= 0.5 {
        return series(a, b, c, z, cfg);
    }
    // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)), applied once
    let w = z / (z - 1.0);
    if w.norm() < r && w.norm() <= 0.8 {
        let pre = (Complex64::new(1.0, 0.0) - z).powc(-a);
        return Ok(pre * series(a, c - b, c, w, cfg)?);
    }
    Err(SpecialError::OutOfCoreRegion { z: z.to_string() })
}
