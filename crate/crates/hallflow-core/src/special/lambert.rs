//! Principal-branch Lambert W.
//!
//! Halley iteration on w·e^w − z with region-dependent initial guesses:
//! a branch-point series in p = √(2(ez+1)) near −1/e, a rational fit near
//! the origin and the two-term asymptotic log expansion for large |z|.
//! Converges to |w e^w − z| ≤ 1e−13·max(1, |z|), usually in 2–4 steps.

use super::SpecialError;
use num_complex::Complex64;

const INV_E: f64 = 1.0 / std::f64::consts::E;
const MAX_ITER: usize = 60;

fn halley_step_real(w: f64, z: f64) -> f64 {
    let ew = w.exp();
    let f = w * ew - z;
    let wp1 = w + 1.0;
    w - f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
}

fn initial_guess_real(z: f64) -> f64 {
    if z < -0.25 {
        // branch-point series around z = -1/e
        let p = (2.0 * (std::f64::consts::E * z + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if z < 1.5 {
        // low-order Pade around 0; adequate to land in Halley's basin
        z * (1.0 + 1.5 * z) / (1.0 + 2.5 * z + 0.875 * z * z)
    } else {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}

/// Principal branch W₀ for real arguments, defined on z ≥ −1/e.
pub fn lambert_w0(z: f64) -> Result<f64, SpecialError> {
    if z.is_nan() {
        return Err(SpecialError::NoConvergence { z: z.to_string() });
    }
    if z < -INV_E {
        // allow round-off dust below the branch point
        if z > -INV_E - 1e-15 * INV_E.max(z.abs()) {
            return Ok(-1.0);
        }
        return Err(SpecialError::BelowBranchPoint {
            z,
            branch_point: -INV_E,
        });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let target = 1e-14 * z.abs().max(1.0);
    let mut w = initial_guess_real(z);
    for _ in 0..MAX_ITER {
        let prev = w;
        w = halley_step_real(w, z);
        if !w.is_finite() {
            w = prev * 0.5 - 0.1;
            continue;
        }
        if (w * w.exp() - z).abs() <= target || (w - prev).abs() <= 1e-16 * w.abs() {
            return Ok(w);
        }
    }
    if (w * w.exp() - z).abs() <= 1e-13 * z.abs().max(1.0) {
        return Ok(w);
    }
    Err(SpecialError::NoConvergence { z: z.to_string() })
}

/// Principal branch W₀ for complex arguments off the cut (−∞, −1/e).
/// Real arguments in the real domain are routed through [`lambert_w0`], so a
/// real input yields an exactly real output.
pub fn lambert_w0_complex(z: Complex64) -> Result<Complex64, SpecialError> {
    if z.im == 0.0 && z.re >= -INV_E {
        return lambert_w0(z.re).map(|w| Complex64::new(w, 0.0));
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut w = if (z + INV_E).norm() < 0.3 {
        let p = (2.0 * (std::f64::consts::E * z + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0
    } else {
        let l = z.ln();
        if l.norm() < 1e-8 {
            z
        } else {
            l - l.ln() / (1.0 + l)
        }
    };
    let target = 1e-14 * z.norm().max(1.0);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        if f.norm() <= target {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom.norm() < 1e-300 {
            w += 0.5;
            continue;
        }
        w -= f / denom;
    }
    let f = w * w.exp() - z;
    if f.norm() <= 1e-13 * z.norm().max(1.0) {
        return Ok(w);
    }
    Err(SpecialError::NoConvergence { z: z.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fixed_points() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert_relative_eq!(
            lambert_w0(std::f64::consts::E).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        // omega constant, frozen from a Newton iteration on w e^w = 1
        assert_relative_eq!(
            lambert_w0(1.0).unwrap(),
            0.5671432904097838,
            max_relative = 1e-15
        );
    }

    #[test]
    fn branch_point_and_domain_error() {
        assert_relative_eq!(lambert_w0(-INV_E).unwrap(), -1.0, epsilon = 2e-7);
        let err = lambert_w0(-0.5).unwrap_err();
        match err {
            SpecialError::BelowBranchPoint { branch_point, .. } => {
                assert_relative_eq!(branch_point, -INV_E, max_relative = 1e-15)
            }
            other => panic!("expected branch-point error, got {other:?}"),
        }
    }

    #[test]
    fn defining_identity_on_log_spaced_samples() {
        let n = 1000;
        let lo: f64 = 1e-6;
        let hi: f64 = 1e6 + INV_E;
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            let offset = lo * (hi / lo).powf(t);
            let z = -INV_E + offset;
            let w = lambert_w0(z).unwrap();
            assert!(
                (w * w.exp() - z).abs() <= 1e-13 * z.abs().max(1.0),
                "identity violated at z = {z}: w = {w}"
            );
        }
    }

    #[test]
    fn complex_identity_and_real_projection() {
        let zs = [
            Complex64::new(0.3, 0.7),
            Complex64::new(-0.9, 0.4),
            Complex64::new(12.0, -5.0),
            Complex64::new(-0.2, -0.05),
            Complex64::new(1e4, 1e3),
        ];
        for z in zs {
            let w = lambert_w0_complex(z).unwrap();
            assert!((w * w.exp() - z).norm() <= 1e-13 * z.norm().max(1.0));
        }
        let w = lambert_w0_complex(Complex64::new(2.0, 0.0)).unwrap();
        assert_eq!(w.im, 0.0);
    }
}
