//! Acceptance suite: every exit criterion at its stated tolerance, one
//! pass/fail line per criterion (visible with `--nocapture`).

use hallflow_core::field::{contour, sample, Grid, Projection};
use hallflow_core::params::{FluidParams, Permeability};
use hallflow_core::presets::{figure_preset, FIGURE_COUNT};
use hallflow_core::solutions::{
    build_family_a, build_family_a_unconstrained, build_family_c2s2, CaseA, ClosedFormY,
    FlowSolution, SolutionError,
};
use hallflow_core::special::{hyp2f1, lambert_w0, SeriesConfig};
use hallflow_core::verify::{
    compatibility_residual, momentum_residual, pressure_concordance, reconstruct_pressure,
    ConcordanceFlag, FdOptions, InjectedField, OperatorCoeffs, PressureSource,
};
use hallflow_core::Complex64;

fn criterion(n: u8, desc: &str, pass: bool) {
    println!(
        "criterion {n:2}: {} - {desc}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {desc}");
}

fn preset_and_grid(n: u8, nx: usize, ny: usize) -> (FlowSolution, Grid) {
    let preset = figure_preset(n).unwrap();
    let sol = preset.build().unwrap();
    let grid = preset.grid(nx, ny, Projection::Real);
    (sol, grid)
}

#[test]
fn criterion_01_exactness_certification() {
    let start = std::time::Instant::now();
    let mut pass = true;
    for n in 1..=FIGURE_COUNT {
        let (sol, grid) = preset_and_grid(n, 21, 21);
        let coeffs = OperatorCoeffs::from_params(sol.fluid());
        let report =
            compatibility_residual(&sol, &coeffs, &grid, &FdOptions::default()).unwrap();
        pass &= report.analytic.passes(1e-10);
        pass &= report.finite_difference.passes(1e-6);
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 10.0;
    criterion(
        1,
        &format!(
            "all 8 presets: analytic rel < 1e-10, finite-difference rel < 1e-6 on 21x21 ({elapsed:.2}s)"
        ),
        pass,
    );
}

#[test]
fn criterion_02_counterexample_sensitivity() {
    let (sol, grid) = preset_and_grid(1, 21, 21);
    let coeffs = OperatorCoeffs::from_params(sol.fluid());
    let report = compatibility_residual(
        &InjectedField::XSqYSq,
        &coeffs,
        &grid,
        &FdOptions::default(),
    )
    .unwrap();
    criterion(
        2,
        &format!(
            "injected psi = x^2 y^2 residual {:.3e} > 1e-2 under identical settings",
            report.analytic.rel_max
        ),
        report.analytic.rel_max > 1e-2 && report.finite_difference.rel_max > 1e-2,
    );
}

#[test]
fn criterion_03_special_function_identities() {
    // Lambert W: 1000 log-spaced samples across the domain
    let mut w_ok = true;
    let (lo, hi): (f64, f64) = (1e-6, 1e6 + 1.0 / std::f64::consts::E);
    for i in 0..1000 {
        let t = i as f64 / 999.0;
        let z = -(1.0 / std::f64::consts::E) + lo * (hi / lo).powf(t);
        let w = lambert_w0(z).unwrap();
        w_ok &= (w * w.exp() - z).abs() <= 1e-13 * z.abs().max(1.0);
    }
    // 2F1(1,1;2;z) = -ln(1-z)/z on 100 samples with |z| <= 0.5
    let cfg = SeriesConfig::default();
    let mut f_ok = true;
    for i in 0..100 {
        let z = -0.5 + (i as f64 / 99.0); // [-0.5, 0.5]
        if z == 0.0 {
            continue;
        }
        let v = hyp2f1(
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(z, 0.0),
            &cfg,
        )
        .unwrap();
        let expect = -(1.0 - z).ln() / z;
        f_ok &= (v.re - expect).abs() <= 1e-10 * expect.abs().max(1.0) && v.im == 0.0;
    }
    // 2F1(a,b;c;0) = 1 exactly
    let unit = hyp2f1(
        Complex64::new(0.3, 0.1),
        Complex64::new(-1.2, 0.0),
        Complex64::new(2.4, -0.3),
        Complex64::new(0.0, 0.0),
        &cfg,
    )
    .unwrap();
    let zero_ok = unit == Complex64::new(1.0, 0.0);
    criterion(
        3,
        "Lambert W identity on 1000 samples; 2F1 log identity on 100 samples; 2F1(a,b;c;0) = 1",
        w_ok && f_ok && zero_ok,
    );
}

#[test]
fn criterion_04_closed_form_vs_contour() {
    let mut pass = true;
    let mut worst_cells: f64 = 0.0;
    for n in [1u8, 2, 6, 7, 8] {
        let preset = figure_preset(n).unwrap();
        let sol = preset.build().unwrap();
        let grid = preset.grid(201, 201, Projection::Real);
        let field = sample(&sol, &grid).unwrap();
        let set = contour(&field, &field.psi, &preset.levels);
        let dy = grid.dy();
        for (li, &level) in preset.levels.iter().enumerate() {
            for i in 0..grid.nx {
                let x = grid.x(i);
                let y_closed = match sol.streamline_closed_form(level, x, Projection::Real) {
                    Ok(ClosedFormY::Point(y)) => y,
                    _ => continue,
                };
                if !(grid.y0 + dy < y_closed && y_closed < grid.y1 - dy) {
                    continue;
                }
                let mut nearest = f64::INFINITY;
                for poly in &set.levels[li].polylines {
                    for seg in poly.windows(2) {
                        let (a, b) = (seg[0], seg[1]);
                        if (a[0] - x) * (b[0] - x) <= 0.0 && a[0] != b[0] {
                            let t = (x - a[0]) / (b[0] - a[0]);
                            if (0.0..=1.0).contains(&t) {
                                nearest = nearest.min((a[1] + t * (b[1] - a[1]) - y_closed).abs());
                            }
                        }
                    }
                }
                if nearest.is_finite() {
                    worst_cells = worst_cells.max(nearest / dy);
                    pass &= nearest <= 2.0 * dy;
                } else {
                    pass = false;
                }
            }
        }
    }
    criterion(
        4,
        &format!(
            "figures 1,2,6,7,8 at 201x201: closed form within 2 grid cells of contours (worst {worst_cells:.3})"
        ),
        pass,
    );
}

#[test]
fn criterion_05_limit_recovery() {
    // viscous: alpha1 = 0, K = inf, H = 0
    let viscous = FluidParams {
        rho: 1.0,
        mu: 0.7,
        alpha1: 0.0,
        alpha2: 0.0,
        permeability: Permeability::Infinite,
        conductivity: 0.0,
        b0: 0.0,
        hall: 0.0,
    };
    let (a, b) = (1.4, 1.4);
    let sol = build_family_a(&viscous, CaseA::Case1, a, b, 1.0, 1.0, 0.0).unwrap();
    let FlowSolution::A(f) = &sol else { panic!() };
    let nu = viscous.mu / viscous.rho;
    let viscous_ok = (f.coef_a.re - (-nu * b)).abs() <= 1e-14 * nu
        && (f.coef_c.re - nu * a).abs() <= 1e-14 * nu
        && f.coef_a.im == 0.0;

    // second grade: K = inf, H = 0 only; independent route must be bit-equal
    let sg = FluidParams {
        alpha1: 0.2,
        alpha2: -0.2,
        ..viscous
    };
    let sol2 = build_family_a(&sg, CaseA::Case1, a, b, 1.0, 1.0, 0.0).unwrap();
    let FlowSolution::A(f2) = &sol2 else { panic!() };
    let sg_a = Complex64::new(-(sg.mu * b) / (sg.rho - sg.alpha1 * b * b), 0.0);
    let sg_c = Complex64::new((sg.mu * a) / (sg.rho - sg.alpha1 * a * a), 0.0);
    let sg_ok = f2.coef_a == sg_a && f2.coef_c == sg_c;

    // Brinkman: alpha1 = 0, phi = 0, finite K adds only the damping term
    let brinkman = FluidParams {
        alpha1: 0.0,
        alpha2: 0.0,
        permeability: Permeability::Finite(0.4),
        conductivity: 0.7,
        b0: 1.0,
        hall: 0.0,
        ..viscous
    };
    let full = OperatorCoeffs::from_params(&brinkman);
    let visc_op = OperatorCoeffs::viscous(brinkman.rho, brinkman.mu);
    let damping = Complex64::new(0.7 + brinkman.mu / 0.4, 0.0);
    let mut brinkman_ok = true;
    let probe = build_family_a(&viscous, CaseA::Case1, 0.9, 0.9, 1.0, 1.0, 0.0).unwrap();
    for k in 0..20 {
        let x = -1.0 + 2.0 * (k as f64 * 0.618_033_988_749_895).fract();
        let y = -1.0 + 2.0 * (k as f64 * 0.754_877_666_246_693).fract();
        use hallflow_core::solutions::StreamField;
        let d = probe.derivs(x, y).unwrap();
        let r_full = hallflow_core::verify::compatibility_residual_point(&full, &d);
        let r_split = hallflow_core::verify::compatibility_residual_point(&visc_op, &d)
            + damping * d.laplacian();
        brinkman_ok &= (r_full - r_split).norm() <= 1e-13 * r_full.norm().max(1.0);
    }
    criterion(
        5,
        "viscous coefficients at 1e-14; bit-equal second-grade specialization; Brinkman operator split at 1e-13",
        viscous_ok && sg_ok && brinkman_ok,
    );
}

#[test]
fn criterion_06_case3_constraint_gate() {
    let mut p = FluidParams {
        rho: 1.0,
        mu: 0.5,
        alpha1: 0.5,
        alpha2: -0.5,
        permeability: Permeability::Finite(2.0),
        conductivity: 0.5,
        b0: 1.0,
        hall: 1.0,
    };
    let rejected = matches!(
        build_family_a(&p, CaseA::Case3, 1.0, -0.5, 1.0, 1.0, 0.0),
        Err(SolutionError::ConstraintViolation { .. })
    );
    p.rho = 0.625; // alpha1 (a^2 + b^2)
    let accepted = build_family_a(&p, CaseA::Case3, 1.0, -0.5, 1.0, 1.0, 0.0).is_ok();
    criterion(
        6,
        "Case 3 rejects rho = 1 and accepts rho = alpha1(a^2+b^2) = 0.625 for a = 1, b = -0.5",
        rejected && accepted,
    );
}

#[test]
fn criterion_07_pressure_concordance() {
    let mut pass = true;
    for n in 1..=FIGURE_COUNT {
        let (sol, grid) = preset_and_grid(n, 9, 9);
        let rec = reconstruct_pressure(&sol, (grid.x0, grid.y0), &grid, 1e-12).unwrap();
        let loop_val = rec.loop_integral(grid.window()).unwrap().norm();
        let scale = rec.p_hat(grid.x1, grid.y1).unwrap().norm().max(1.0);
        pass &= loop_val < 1e-8 * scale;
        let momentum = momentum_residual(
            &sol,
            &grid,
            &PressureSource::Reconstructed(&rec),
            &FdOptions::default(),
        )
        .unwrap();
        pass &= momentum.x_eq.passes(1e-8) && momentum.y_eq.passes(1e-8);
        // frozen fixture: every printed formula disagrees with the
        // reconstruction by more than a constant
        let flag = pressure_concordance(&sol, &rec, &grid).unwrap();
        pass &= matches!(flag, ConcordanceFlag::Disagrees { .. });
    }
    criterion(
        7,
        "loop integrals < 1e-8, reconstructed momentum residuals < 1e-8, concordance flags stable (all disagree)",
        pass,
    );
}

#[test]
fn criterion_08_subcase2_certification() {
    // R(theta) from the hypergeometric construction satisfies the theta
    // equation (1+λθ)θ²R'' + (1+X₁+3λθ)θR' + (X₂+X₃λθ)R = 0
    let p = FluidParams {
        rho: 1.0,
        mu: 0.5,
        alpha1: 0.1,
        alpha2: -0.1,
        permeability: Permeability::Finite(1.8),
        conductivity: 1.0,
        b0: 1.0,
        hall: 1.0,
    };
    let lambda = 1.0;
    let sol = build_family_c2s2(
        &p,
        lambda,
        1.0,
        1.0,
        0.0,
        0.0,
        SeriesConfig::default(),
        1e-12,
    )
    .unwrap();
    let FlowSolution::C(fc) = &sol else { panic!() };
    let hallflow_core::solutions::CVariant::C2s2(hs) = &fc.variant else {
        panic!()
    };
    let mut worst: f64 = 0.0;
    for k in 0..33 {
        let theta = (0.1 + 0.8 * k as f64 / 32.0) / lambda;
        let r = hs.r_derivs(theta, 2).unwrap();
        let t0 = (1.0 + lambda * theta) * theta * theta * r[2];
        let t1 = (1.0 + hs.x1 + 3.0 * lambda * theta) * theta * r[1];
        let t2 = (hs.x2 + hs.x3 * lambda * theta) * r[0];
        let rel = (t0 + t1 + t2).norm() / t0.norm().max(t1.norm()).max(t2.norm());
        worst = worst.max(rel);
    }
    criterion(
        8,
        &format!("hypergeometric R(theta) residual {worst:.3e} < 1e-7 on theta in [0.1, 0.9]/lambda"),
        worst < 1e-7,
    );
}

#[test]
fn criterion_09_concluding_trend() {
    // frozen oracle: real-projected speed at the origin for the figure-3
    // base parameters drops when the second-grade parameter rises
    let base = FluidParams {
        rho: 1.0,
        mu: 0.5,
        alpha1: 0.0,
        alpha2: 0.0,
        permeability: Permeability::Finite(2.0),
        conductivity: 0.5,
        b0: 1.0,
        hall: 1.0,
    };
    let speed = |alpha1: f64| {
        let p = FluidParams {
            alpha1,
            alpha2: -alpha1,
            ..base
        };
        let sol = build_family_a_unconstrained(&p, 1.0, -0.5, 1.0, 1.0).unwrap();
        let s = sol.eval_field(0.0, 0.0).unwrap();
        s.u.re.hypot(s.v.re)
    };
    let slow = speed(0.5);
    let fast = speed(-0.5);
    // frozen from the pre-build evaluation oracle
    let frozen_fast = 0.600925212577332;
    let frozen_slow = 0.520007849234323;
    let pass = fast > slow
        && (fast - frozen_fast).abs() < 1e-12
        && (slow - frozen_slow).abs() < 1e-12;
    criterion(
        9,
        &format!("speed(Lambda=-0.5) = {fast:.6} > speed(Lambda=+0.5) = {slow:.6}, matching the frozen oracle"),
        pass,
    );
}

#[test]
fn criterion_10_byte_determinism() {
    let bin = env!("CARGO_BIN_EXE_hallflow");
    let run = |dir: &std::path::Path| {
        let status = std::process::Command::new(bin)
            .args([
                "figure",
                "-f",
                "6",
                "--out",
                dir.to_str().unwrap(),
                "--grid",
                "101,101",
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    run(d1.path());
    run(d2.path());
    let mut pass = true;
    for name in ["figure6_contours.csv", "figure6_closed_form.csv", "figure6.svg"] {
        let a = std::fs::read(d1.path().join(name)).unwrap();
        let b = std::fs::read(d2.path().join(name)).unwrap();
        pass &= a == b;
    }
    criterion(10, "repeated figure runs emit byte-identical CSV and SVG", pass);
}
