//! Centered finite-difference stencils on tensor-product footprints.
//!
//! Truncation orders: derivatives of order ≤ 3 use 4th-order stencils at the
//! low step; orders 4–5 use 2nd-order stencils at the (larger) high step
//! with Richardson extrapolation, which lifts them to order 2 + 2·levels.
//! Naive high-order stencils at the low step would be round-off dominated.

use super::VerifyError;
use crate::solutions::{GrowthRates, PsiDerivs, SolutionError};
use num_complex::Complex64;

/// ψ-evaluator used by the finite-difference paths.
pub type PsiFn<'a> = &'a (dyn Fn(f64, f64) -> Result<Complex64, SolutionError> + Sync);

struct Stencil {
    coeffs: &'static [f64],
    /// offsets run -(len-1)/2 ..= (len-1)/2
    order: usize,
}

// 4th-order accurate
const D0: Stencil = Stencil { coeffs: &[1.0], order: 0 };
const D1_O4: Stencil = Stencil {
    coeffs: &[1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0],
    order: 1,
};
const D2_O4: Stencil = Stencil {
    coeffs: &[-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0],
    order: 2,
};
const D3_O4: Stencil = Stencil {
    coeffs: &[1.0 / 8.0, -1.0, 13.0 / 8.0, 0.0, -13.0 / 8.0, 1.0, -1.0 / 8.0],
    order: 3,
};
// 2nd-order accurate
const D1_O2: Stencil = Stencil {
    coeffs: &[-0.5, 0.0, 0.5],
    order: 1,
};
const D2_O2: Stencil = Stencil {
    coeffs: &[1.0, -2.0, 1.0],
    order: 2,
};
const D3_O2: Stencil = Stencil {
    coeffs: &[-0.5, 1.0, 0.0, -1.0, 0.5],
    order: 3,
};
const D4_O2: Stencil = Stencil {
    coeffs: &[1.0, -4.0, 6.0, -4.0, 1.0],
    order: 4,
};
const D5_O2: Stencil = Stencil {
    coeffs: &[-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5],
    order: 5,
};

fn pick(order: usize, fourth: bool) -> &'static Stencil {
    match (order, fourth) {
        (0, _) => &D0,
        (1, true) => &D1_O4,
        (2, true) => &D2_O4,
        (3, true) => &D3_O4,
        (1, false) => &D1_O2,
        (2, false) => &D2_O2,
        (3, false) => &D3_O2,
        (4, _) => &D4_O2,
        (5, _) => &D5_O2,
        _ => unreachable!("derivative order beyond 5"),
    }
}

fn apply(
    f: PsiFn,
    x: f64,
    y: f64,
    sx: &Stencil,
    sy: &Stencil,
    hx: f64,
    hy: f64,
) -> Result<Complex64, SolutionError> {
    let cx = sx.coeffs;
    let cy = sy.coeffs;
    let rx = (cx.len() as isize - 1) / 2;
    let ry = (cy.len() as isize - 1) / 2;
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, &wa) in cx.iter().enumerate() {
        if wa == 0.0 {
            continue;
        }
        let xi = x + (a as isize - rx) as f64 * hx;
        for (b, &wb) in cy.iter().enumerate() {
            if wb == 0.0 {
                continue;
            }
            let yj = y + (b as isize - ry) as f64 * hy;
            acc += (wa * wb) * f(xi, yj)?;
        }
    }
    Ok(acc / hx.powi(sx.order as i32) / hy.powi(sy.order as i32))
}

/// Options for the finite-difference derivative oracle.
///
/// Fifth derivatives in f64 are round-off limited: the stencil noise scales
/// like ε/h⁵ while truncation scales like (rate·h)². The steps below are
/// base values for a unit growth rate; each derivative divides them by the
/// relevant [`GrowthRates`] entry (floored at 0.25), so stiff axes shrink
/// their step and exponential-free axes enlarge it. Accuracy beyond the
/// base stencil order comes from Richardson extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    /// Step for derivative orders ≤ 2 (4th-order stencils, no extrapolation).
    pub h_low: f64,
    /// Base step for order 3 (4th-order stencil + `rich_mid` levels).
    pub h_mid: f64,
    /// Base step for orders 4–5 (2nd-order stencils + `rich_high` levels).
    pub h_high: f64,
    pub rich_mid: usize,
    pub rich_high: usize,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions {
            h_low: 1e-3,
            h_mid: 0.08,
            h_high: 0.12,
            rich_mid: 1,
            rich_high: 2,
        }
    }
}

const MIN_RATE: f64 = 0.25;

/// Richardson triangle for a centered stencil whose error expansion runs in
/// even powers of h starting at h^base_order.
fn richardson<F: FnMut(f64) -> Result<Complex64, SolutionError>>(
    mut eval: F,
    h: f64,
    levels: usize,
    base_order: usize,
) -> Result<Complex64, SolutionError> {
    let mut table = Vec::with_capacity(levels + 1);
    for lvl in 0..=levels {
        table.push(eval(h / f64::powi(2.0, lvl as i32))?);
    }
    let n = table.len();
    for round in 1..n {
        let factor = f64::powi(2.0, (base_order + 2 * (round - 1)) as i32);
        for k in 0..n - round {
            table[k] = (factor * table[k + 1] - table[k]) / (factor - 1.0);
        }
    }
    Ok(table[0])
}

fn partial(
    f: PsiFn,
    x: f64,
    y: f64,
    i: usize,
    j: usize,
    opts: &FdOptions,
    rates: &GrowthRates,
) -> Result<Complex64, SolutionError> {
    let (rate_x, rate_y) = if j == 0 {
        (rates.pure_x, 0.0)
    } else if i == 0 {
        (0.0, rates.pure_y)
    } else {
        (rates.mixed_x, rates.mixed_y)
    };
    let sx = 1.0 / rate_x.max(MIN_RATE);
    let sy = 1.0 / rate_y.max(MIN_RATE);
    if i + j <= 2 {
        let h = opts.h_low;
        return apply(f, x, y, pick(i, true), pick(j, true), h, h);
    }
    if i + j == 3 {
        return richardson(
            |h| apply(f, x, y, pick(i, true), pick(j, true), h * sx, h * sy),
            opts.h_mid,
            opts.rich_mid,
            4,
        );
    }
    richardson(
        |h| apply(f, x, y, pick(i, false), pick(j, false), h * sx, h * sy),
        opts.h_high,
        opts.rich_high,
        2,
    )
}

const NEEDED: [(usize, usize); 17] = [
    (1, 0),
    (0, 1),
    (2, 0),
    (0, 2),
    (3, 0),
    (0, 3),
    (2, 1),
    (1, 2),
    (4, 0),
    (0, 4),
    (2, 2),
    (5, 0),
    (0, 5),
    (3, 2),
    (2, 3),
    (4, 1),
    (1, 4),
];

/// Finite-difference approximation of every ψ partial the governing
/// operators need (all i + j ≤ 5 that enter ∇², ∇⁴ and their gradients).
pub fn fd_derivs(
    f: PsiFn,
    x: f64,
    y: f64,
    opts: &FdOptions,
    rates: &GrowthRates,
) -> Result<PsiDerivs, SolutionError> {
    let mut d = PsiDerivs::zero();
    d.set(0, 0, f(x, y)?);
    for (i, j) in NEEDED {
        let v = partial(f, x, y, i, j, opts, rates)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(SolutionError::BadShape(format!(
                "non-finite stencil value for d({i},{j}) at ({x}, {y})"
            )));
        }
        d.set(i, j, v);
    }
    Ok(d)
}

/// Named differential operators at a point, from centered stencils.
#[derive(Debug, Clone, Copy)]
pub struct DiffOperators {
    pub derivs: PsiDerivs,
    pub laplacian: Complex64,
    pub biharmonic: Complex64,
}

/// Finite-difference ∇²ψ, ∇⁴ψ and all partial derivatives up to 5th order.
/// `h` is the low-order step; orders 4–5 use the default high step scaled
/// down to `10·h` when that is smaller.
pub fn differential_operators(
    f: PsiFn,
    x: f64,
    y: f64,
    h: f64,
) -> Result<DiffOperators, VerifyError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(VerifyError::Grid(format!("step h = {h} must be positive")));
    }
    let opts = FdOptions {
        h_low: h,
        h_mid: 0.08f64.max(h),
        h_high: 0.12f64.max(h),
        rich_mid: 1,
        rich_high: 2,
    };
    let derivs = fd_derivs(f, x, y, &opts, &GrowthRates::default()).map_err(|e| VerifyError::Stencil {
        x,
        y,
        detail: e.to_string(),
    })?;
    Ok(DiffOperators {
        derivs,
        laplacian: derivs.laplacian(),
        biharmonic: derivs.biharmonic(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ok(v: f64) -> Result<Complex64, SolutionError> {
        Ok(Complex64::new(v, 0.0))
    }

    #[test]
    fn polynomial_exactness() {
        // psi = x^2 + y^2: Laplacian 4, biharmonic 0, exactly on centered stencils
        let f = |x: f64, y: f64| ok(x * x + y * y);
        let ops = differential_operators(&f, 0.3, -0.7, 1e-3).unwrap();
        assert_relative_eq!(ops.laplacian.re, 4.0, epsilon = 1e-9);
        assert!(ops.biharmonic.norm() < 1e-6);
    }

    #[test]
    fn exponential_laplacian_fourth_order() {
        let f = |x: f64, y: f64| ok((x + y).exp());
        let (x, y) = (0.2, 0.4);
        let ops = differential_operators(&f, x, y, 1e-3).unwrap();
        let expect = 2.0 * (x + y).exp();
        // truncation is O(h^4); the floor here is stencil round-off at eps/h^2
        assert_relative_eq!(ops.laplacian.re, expect, max_relative = 5e-9);
    }

    #[test]
    fn sine_biharmonic_second_order() {
        let f = |x: f64, y: f64| ok(x.sin() * y.sin());
        let (x, y) = (0.9, 0.5);
        let ops = differential_operators(&f, x, y, 1e-3).unwrap();
        let expect = 4.0 * x.sin() * y.sin();
        assert_relative_eq!(ops.biharmonic.re, expect, max_relative = 1e-6);
    }

    #[test]
    fn fifth_derivative_of_exponential() {
        let f = |x: f64, y: f64| ok((2.0 * x).exp() * (1.0 + 0.0 * y));
        let d = fd_derivs(&f, 0.1, 0.0, &FdOptions::default(), &GrowthRates::default()).unwrap();
        let expect = 32.0 * (0.2f64).exp();
        assert_relative_eq!(d.d(5, 0).re, expect, max_relative = 1e-7);
    }

    #[test]
    fn non_finite_detected() {
        let f = |x: f64, _y: f64| {
            if x > 0.55 {
                ok(f64::NAN)
            } else {
                ok(x)
            }
        };
        assert!(differential_operators(&f, 0.549, 0.0, 1e-3).is_err());
    }
}
