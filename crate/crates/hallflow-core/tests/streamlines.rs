//! Closed-form streamline curves against the marching-squares oracle, plus
//! sampling performance and emission determinism.

use hallflow_core::field::{contour, sample, to_csv, to_svg, Projection};
use hallflow_core::presets::figure_preset;
use hallflow_core::solutions::ClosedFormY;

/// All y-crossings of the traced polylines along the vertical line x = x0.
fn crossings_at(set: &hallflow_core::StreamlineSet, level_idx: usize, x0: f64) -> Vec<f64> {
    let mut ys = Vec::new();
    for poly in &set.levels[level_idx].polylines {
        for seg in poly.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if (a[0] - x0) * (b[0] - x0) <= 0.0 && a[0] != b[0] {
                let t = (x0 - a[0]) / (b[0] - a[0]);
                if (0.0..=1.0).contains(&t) {
                    ys.push(a[1] + t * (b[1] - a[1]));
                }
            }
        }
    }
    ys
}

/// Cross-method agreement for one figure at the given resolution: wherever
/// the closed form yields a point inside the window, some contour crossing
/// must sit within `cells` grid cells vertically.
fn check_figure(n: u8, nx: usize, ny: usize, cells: f64) -> (usize, f64) {
    let preset = figure_preset(n).unwrap();
    let sol = preset.build().unwrap();
    let grid = preset.grid(nx, ny, Projection::Real);
    let field = sample(&sol, &grid).unwrap();
    let set = contour(&field, &field.psi, &preset.levels);
    let dy = grid.dy();
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for (li, &level) in preset.levels.iter().enumerate() {
        for i in 0..nx {
            let x = grid.x(i);
            let y_closed = match sol.streamline_closed_form(level, x, Projection::Real) {
                Ok(ClosedFormY::Point(y)) => y,
                _ => continue,
            };
            // interior points only: boundary-cell crossings are clipped
            if !(grid.y0 + dy < y_closed && y_closed < grid.y1 - dy) {
                continue;
            }
            let ys = crossings_at(&set, li, x);
            let nearest = ys
                .iter()
                .map(|y| (y - y_closed).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(
                nearest.is_finite(),
                "figure {n} level {level}: no contour near x = {x} (closed form y = {y_closed})"
            );
            worst = worst.max(nearest / dy);
            checked += 1;
            assert!(
                nearest <= cells * dy,
                "figure {n} level {level} x = {x}: closed form y = {y_closed}, nearest contour {nearest:.3e} away ({:.2} cells)",
                nearest / dy
            );
        }
    }
    (checked, worst)
}

#[test]
fn closed_form_matches_contours() {
    // the families with printed functional forms, at a moderate resolution
    for n in [1u8, 2, 6, 7, 8] {
        let (checked, worst) = check_figure(n, 141, 141, 2.0);
        println!("figure {n}: {checked} column checks, worst {worst:.3} cells");
        assert!(checked > 50, "figure {n}: too few comparable columns");
    }
}

#[test]
fn closed_form_round_trip_on_windows() {
    // Re psi(x, y(x)) = Omega within 1e-9 wherever the closed form exists
    for n in [1u8, 2, 3, 4, 5, 6, 7, 8] {
        let preset = figure_preset(n).unwrap();
        let sol = preset.build().unwrap();
        let grid = preset.grid(41, 2, Projection::Real);
        for &level in &preset.levels {
            for i in 0..grid.nx {
                let x = grid.x(i);
                match sol.streamline_closed_form(level, x, Projection::Real) {
                    Ok(ClosedFormY::Point(y)) => {
                        let psi = sol.eval_field(x, y).unwrap().psi.re;
                        assert!(
                            (psi - level).abs() <= 1e-9 * level.max(1.0),
                            "figure {n} level {level} x = {x}: psi = {psi}"
                        );
                    }
                    Ok(ClosedFormY::BranchTerminated) => {}
                    Err(hallflow_core::solutions::SolutionError::NoClosedForm) => break,
                    Err(e) => panic!("figure {n}: {e}"),
                }
            }
        }
    }
}

#[test]
fn sampling_201_grid_under_a_second() {
    let preset = figure_preset(1).unwrap();
    let sol = preset.build().unwrap();
    let grid = preset.grid(201, 201, Projection::Real);
    let start = std::time::Instant::now();
    let field = sample(&sol, &grid).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(field.psi.len(), 201 * 201);
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "sampling took {elapsed:?}, expected < 1s"
    );
}

#[test]
fn emission_is_deterministic_across_runs() {
    let preset = figure_preset(6).unwrap();
    let sol = preset.build().unwrap();
    let grid = preset.grid(81, 81, Projection::Real);
    let emit = || {
        let field = sample(&sol, &grid).unwrap();
        let set = contour(&field, &field.psi, &preset.levels);
        (to_csv(&set), to_svg(&set, preset.window))
    };
    let (csv1, svg1) = emit();
    let (csv2, svg2) = emit();
    assert_eq!(csv1, csv2);
    assert_eq!(svg1, svg2);
    // figure-8 preset emits all five caption levels
    let preset8 = figure_preset(8).unwrap();
    let sol8 = preset8.build().unwrap();
    let grid8 = preset8.grid(101, 101, Projection::Real);
    let field8 = sample(&sol8, &grid8).unwrap();
    let set8 = contour(&field8, &field8.psi, &preset8.levels);
    assert_eq!(set8.levels.len(), 5);
    for lc in &set8.levels {
        assert!(
            !lc.polylines.is_empty(),
            "figure 8 level {} produced no polyline",
            lc.level
        );
    }
}

#[test]
fn contour_vertices_sit_on_their_level() {
    // every traced vertex satisfies |psi(v) - level| < tol, with tol set by
    // the local field variation across one cell
    let preset = figure_preset(1).unwrap();
    let sol = preset.build().unwrap();
    let grid = preset.grid(101, 101, Projection::Real);
    let field = sample(&sol, &grid).unwrap();
    let set = contour(&field, &field.psi, &preset.levels);
    for lc in &set.levels {
        for poly in &lc.polylines {
            for p in poly {
                let psi = sol.eval_field(p[0], p[1]).unwrap().psi.re;
                // linear interpolation of an exponential: second-order cell error
                let tol = 0.05 * lc.level.abs().max(1.0);
                assert!(
                    (psi - lc.level).abs() < tol,
                    "vertex {p:?} off level {}: psi = {psi}",
                    lc.level
                );
            }
        }
    }
}
