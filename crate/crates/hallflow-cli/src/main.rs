//! Command-line front door: evaluate solutions, run verification suites,
//! trace streamlines and reproduce the eight figure presets.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or config error.

mod report;
mod sweep;

use clap::{Args, Parser, Subcommand};
use hallflow_core::field::{contour, sample, write_csv, write_svg, Grid, Projection};
use hallflow_core::presets::figure_preset;
use hallflow_core::solutions::{ClosedFormY, FlowSolution, SolutionConfig, SolutionError};
use hallflow_core::verify::{
    compatibility_residual, momentum_residual, pressure_concordance, reconstruct_pressure,
    FdOptions, InjectedField, OperatorCoeffs, PressureSource,
};
use report::{FigureReport, VerifyReport};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hallflow",
    about = "Exact second-grade MHD channel flows with Hall currents: evaluation, certification, streamlines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Sample counts NX,NY
    #[arg(long, value_parser = parse_pair_usize)]
    grid: Option<(usize, usize)>,
    /// Window X0,X1,Y0,Y1
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<[f64; 4]>,
    /// Projection of complex fields (real|imag|mod)
    #[arg(long, default_value = "real", value_parser = parse_projection)]
    projection: Projection,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce a shipped figure preset: certify, trace, emit CSV + SVG
    Figure {
        /// Figure number 1..=8
        #[arg(long, short = 'f', value_name = "N")]
        figure: u8,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Analytic-path relative residual tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Emit the machine-readable report on stdout
        #[arg(long)]
        json: bool,
    },
    /// Verify a solution (or a preset, or an injected counterexample)
    Verify {
        /// Config JSON path; see the README for the schema
        #[arg(long, conflicts_with = "figure")]
        config: Option<PathBuf>,
        /// Verify a shipped preset instead of a config file
        #[arg(long, short = 'f')]
        figure: Option<u8>,
        #[command(flatten)]
        grid: GridArgs,
        /// Analytic-path relative residual tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a solution at a point or over a grid
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// Single point X,Y; prints a JSON sample
        #[arg(long, value_parser = parse_pair_f64)]
        at: Option<(f64, f64)>,
        /// Output directory for the sampled field CSV
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Trace stream-function level curves with marching squares
    Contour {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated levels
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        levels: Vec<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sweep one parameter and tabulate point observables plus residuals
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_projection(s: &str) -> Result<Projection, String> {
    s.parse()
}

fn parse_pair_usize(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected NX,NY".into());
    }
    Ok((
        parts[0].trim().parse().map_err(|e| format!("{e}"))?,
        parts[1].trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn parse_pair_f64(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected X,Y".into());
    }
    Ok((
        parts[0].trim().parse().map_err(|e| format!("{e}"))?,
        parts[1].trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn parse_window(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected X0,X1,Y0,Y1".into());
    }
    let mut w = [0.0; 4];
    for (slot, part) in w.iter_mut().zip(parts) {
        *slot = part.trim().parse().map_err(|e| format!("{e}"))?;
    }
    Ok(w)
}

/// Failures carrying their process exit code.
enum Failure {
    /// Bad usage, config, or I/O: exit 2.
    Usage(String),
    /// A residual exceeded its tolerance: exit 1.
    Verification(String),
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Figure {
            figure,
            out,
            grid,
            tol,
            json,
        } => cmd_figure(figure, &out, &grid, tol, json),
        Command::Verify {
            config,
            figure,
            grid,
            tol,
            json,
        } => cmd_verify(config.as_deref(), figure, &grid, tol, json),
        Command::Eval {
            config,
            at,
            out,
            grid,
        } => cmd_eval(&config, at, out.as_deref(), &grid),
        Command::Contour {
            config,
            levels,
            out,
            grid,
        } => cmd_contour(&config, &levels, &out, &grid),
        Command::Sweep { config, out } => sweep::cmd_sweep(&config, out.as_deref()),
    }
}

fn load_solution_config(path: &Path) -> Result<SolutionConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))
}

fn build_grid(window: [f64; 4], grid: &GridArgs, default_n: (usize, usize)) -> Result<Grid, Failure> {
    let (nx, ny) = grid.grid.unwrap_or(default_n);
    let window = grid.window.unwrap_or(window);
    Grid::new(window, nx, ny, grid.projection).map_err(Failure::usage)
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))
}

/// Closed-form level curves sampled per grid column; polylines break at
/// branch terminations and window exits.
fn closed_form_set(
    sol: &FlowSolution,
    grid: &Grid,
    levels: &[f64],
) -> Result<Option<hallflow_core::StreamlineSet>, Failure> {
    use hallflow_core::field::{ContourMethod, LevelCurves, StreamlineSet};
    let mut set = StreamlineSet::empty(ContourMethod::ClosedForm);
    for &level in levels {
        let mut polylines = Vec::new();
        let mut current: Vec<[f64; 2]> = Vec::new();
        for i in 0..grid.nx {
            let x = grid.x(i);
            let point = match sol.streamline_closed_form(level, x, grid.projection) {
                Ok(ClosedFormY::Point(y)) if y >= grid.y0 && y <= grid.y1 => Some([x, y]),
                Ok(_) => None,
                Err(SolutionError::NoClosedForm)
                | Err(SolutionError::NoClosedFormProjection { .. }) => return Ok(None),
                Err(e) => return Err(Failure::usage(e)),
            };
            match point {
                Some(p) => current.push(p),
                None => {
                    if current.len() > 1 {
                        polylines.push(std::mem::take(&mut current));
                    }
                    current.clear();
                }
            }
        }
        if current.len() > 1 {
            polylines.push(current);
        }
        set.levels.push(LevelCurves { level, polylines });
    }
    Ok(Some(set))
}

fn cmd_figure(
    n: u8,
    out: &Path,
    grid_args: &GridArgs,
    tol: f64,
    json: bool,
) -> Result<(), Failure> {
    if !(tol > 0.0) {
        return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let preset = figure_preset(n).map_err(Failure::usage)?;
    let sol = preset.build().map_err(Failure::usage)?;
    ensure_dir(out)?;

    // certification on a 21x21 grid over the window
    let cert_grid = build_grid(preset.window, &GridArgs {
        grid: Some((21, 21)),
        window: grid_args.window,
        projection: grid_args.projection,
    }, (21, 21))?;
    let coeffs = OperatorCoeffs::from_params(sol.fluid());
    let compat = compatibility_residual(&sol, &coeffs, &cert_grid, &FdOptions::default())
        .map_err(Failure::usage)?;

    // pressure reconstruction and concordance with the printed formula
    let rec = reconstruct_pressure(&sol, (cert_grid.x0, cert_grid.y0), &cert_grid, 1e-12)
        .map_err(Failure::usage)?;
    let momentum = momentum_residual(
        &sol,
        &cert_grid,
        &PressureSource::Reconstructed(&rec),
        &FdOptions::default(),
    )
    .map_err(Failure::usage)?;
    let concordance = pressure_concordance(&sol, &rec, &cert_grid).map_err(Failure::usage)?;

    // streamline tracing on the display grid
    let display_grid = build_grid(preset.window, grid_args, (201, 201))?;
    let field = sample(&sol, &display_grid).map_err(Failure::usage)?;
    let traced = contour(&field, &field.psi, &preset.levels);
    let stem = format!("figure{n}");
    write_csv(&traced, &out.join(format!("{stem}_contours.csv"))).map_err(Failure::usage)?;
    write_svg(&traced, display_grid.window(), &out.join(format!("{stem}.svg")))
        .map_err(Failure::usage)?;
    if let Some(closed) = closed_form_set(&sol, &display_grid, &preset.levels)? {
        write_csv(&closed, &out.join(format!("{stem}_closed_form.csv"))).map_err(Failure::usage)?;
    }

    let fd_tol = 1e-6;
    let passed = compat.analytic.passes(tol) && compat.finite_difference.passes(fd_tol);
    let report = FigureReport {
        figure: n,
        family: preset.family.to_string(),
        window: display_grid.window(),
        levels: preset.levels.clone(),
        analytic_rel_re: compat.analytic.rel_re,
        analytic_rel_im: compat.analytic.rel_im,
        fd_rel_re: compat.finite_difference.rel_re,
        fd_rel_im: compat.finite_difference.rel_im,
        momentum_x_rel: momentum.x_eq.rel_max,
        momentum_y_rel: momentum.y_eq.rel_max,
        concordance,
        tolerance_analytic: tol,
        tolerance_fd: fd_tol,
        passed,
    };
    let report_json = serde_json::to_string_pretty(&report).map_err(Failure::usage)?;
    std::fs::write(out.join(format!("{stem}_report.json")), &report_json)
        .map_err(Failure::usage)?;
    if json {
        println!("{report_json}");
    } else {
        println!(
            "figure {n} ({}): analytic rel (re {:.3e}, im {:.3e}), fd rel (re {:.3e}, im {:.3e}) -> {}",
            report.family,
            report.analytic_rel_re,
            report.analytic_rel_im,
            report.fd_rel_re,
            report.fd_rel_im,
            if passed { "pass" } else { "FAIL" }
        );
        println!("wrote {}", out.join(format!("{stem}.svg")).display());
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "figure {n}: residual exceeds tolerance (analytic {:.3e}/{:.3e} vs {tol:.1e}, fd {:.3e}/{:.3e} vs {fd_tol:.1e})",
            report.analytic_rel_re, report.analytic_rel_im, report.fd_rel_re, report.fd_rel_im
        )))
    }
}

/// Verify config file: one of
///   {"figure": 3}
///   {"solution": { ...solution config... }}
///   {"injected": "x2y2", "params": { ...fluid params... }}
/// plus optional "window": [x0,x1,y0,y1] and "grid": [nx, ny].
#[derive(serde::Deserialize)]
struct VerifyConfig {
    figure: Option<u8>,
    solution: Option<SolutionConfig>,
    injected: Option<String>,
    params: Option<hallflow_core::params::FluidParamsConfig>,
    window: Option<[f64; 4]>,
    grid: Option<[usize; 2]>,
}

fn cmd_verify(
    config: Option<&Path>,
    figure: Option<u8>,
    grid_args: &GridArgs,
    tol: f64,
    json: bool,
) -> Result<(), Failure> {
    let cfg: VerifyConfig = match (config, figure) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?
        }
        (None, Some(n)) => VerifyConfig {
            figure: Some(n),
            solution: None,
            injected: None,
            params: None,
            window: None,
            grid: None,
        },
        _ => {
            return Err(Failure::Usage(
                "verify needs exactly one of --config PATH or --figure N".into(),
            ))
        }
    };

    let mut window = cfg.window.unwrap_or([-2.0, 2.0, -2.0, 2.0]);
    let default_n = cfg.grid.map(|g| (g[0], g[1])).unwrap_or((21, 21));

    // assemble the field under test and its operator coefficients
    let (label, sol, injected, params) = match (&cfg.figure, &cfg.solution, &cfg.injected) {
        (Some(n), None, None) => {
            let preset = figure_preset(*n).map_err(Failure::usage)?;
            window = cfg.window.unwrap_or(preset.window);
            let sol = preset.build().map_err(Failure::usage)?;
            (format!("figure {n}"), Some(sol), None, None)
        }
        (None, Some(sc), None) => {
            let sol = sc.build().map_err(Failure::usage)?;
            (format!("solution {}", sc.family), Some(sol), None, None)
        }
        (None, None, Some(name)) => {
            let field: InjectedField = name.parse().map_err(Failure::Usage)?;
            let params = cfg
                .params
                .as_ref()
                .ok_or_else(|| {
                    Failure::Usage("injected verification needs a \"params\" block".into())
                })?
                .build()
                .map_err(Failure::usage)?;
            (format!("injected {name}"), None, Some(field), Some(params))
        }
        _ => {
            return Err(Failure::Usage(
                "config must contain exactly one of figure | solution | injected".into(),
            ))
        }
    };

    let grid = build_grid(window, grid_args, default_n)?;
    let report = match (&sol, &injected) {
        (Some(sol), None) => {
            let coeffs = OperatorCoeffs::from_params(sol.fluid());
            compatibility_residual(sol, &coeffs, &grid, &FdOptions::default())
                .map_err(Failure::usage)?
        }
        (None, Some(field)) => {
            let coeffs = OperatorCoeffs::from_params(&params.unwrap());
            compatibility_residual(field, &coeffs, &grid, &FdOptions::default())
                .map_err(Failure::usage)?
        }
        _ => unreachable!(),
    };

    let fd_tol = 1e-6;
    let passed = report.analytic.passes(tol) && report.finite_difference.passes(fd_tol);
    let out = VerifyReport {
        subject: label.clone(),
        analytic_rel_re: report.analytic.rel_re,
        analytic_rel_im: report.analytic.rel_im,
        fd_rel_re: report.finite_difference.rel_re,
        fd_rel_im: report.finite_difference.rel_im,
        excluded_points: report.analytic.excluded.len(),
        tolerance_analytic: tol,
        tolerance_fd: fd_tol,
        passed,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&out).map_err(Failure::usage)?);
    } else {
        println!(
            "{label}: analytic rel (re {:.3e}, im {:.3e}), fd rel (re {:.3e}, im {:.3e}) -> {}",
            out.analytic_rel_re,
            out.analytic_rel_im,
            out.fd_rel_re,
            out.fd_rel_im,
            if passed { "pass" } else { "FAIL" }
        );
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{label}: relative residual (analytic {:.3e}/{:.3e}, fd {:.3e}/{:.3e}) exceeds tolerance",
            out.analytic_rel_re, out.analytic_rel_im, out.fd_rel_re, out.fd_rel_im
        )))
    }
}

fn cmd_eval(
    config: &Path,
    at: Option<(f64, f64)>,
    out: Option<&Path>,
    grid_args: &GridArgs,
) -> Result<(), Failure> {
    let sc = load_solution_config(config)?;
    let sol = sc.build().map_err(Failure::usage)?;
    match (at, out) {
        (Some((x, y)), _) => {
            let s = sol.eval_field(x, y).map_err(Failure::usage)?;
            let pr = s.project(grid_args.projection);
            let value = serde_json::json!({
                "x": x, "y": y,
                "psi": {"re": s.psi.re, "im": s.psi.im},
                "u": {"re": s.u.re, "im": s.u.im},
                "v": {"re": s.v.re, "im": s.v.im},
                "omega": {"re": s.omega.re, "im": s.omega.im},
                "p": s.p.map(|p| serde_json::json!({"re": p.re, "im": p.im})),
                "projected": {
                    "psi": pr.psi, "u": pr.u, "v": pr.v, "omega": pr.omega, "p": pr.p,
                },
            });
            println!("{}", serde_json::to_string_pretty(&value).map_err(Failure::usage)?);
            Ok(())
        }
        (None, Some(dir)) => {
            let grid = build_grid([-2.0, 2.0, -2.0, 2.0], grid_args, (101, 101))?;
            let field = sample(&sol, &grid).map_err(Failure::usage)?;
            ensure_dir(dir)?;
            let mut csv = String::from("x,y,psi,u,v,p,masked\n");
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let idx = j * grid.nx + i;
                    csv.push_str(&format!(
                        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                        grid.x(i),
                        grid.y(j),
                        field.psi[idx],
                        field.u[idx],
                        field.v[idx],
                        field.p[idx],
                        !field.mask[idx],
                    ));
                }
            }
            std::fs::write(dir.join("field.csv"), csv).map_err(Failure::usage)?;
            println!("wrote {}", dir.join("field.csv").display());
            Ok(())
        }
        (None, None) => Err(Failure::Usage(
            "eval needs --at X,Y or --out DIR".into(),
        )),
    }
}

fn cmd_contour(
    config: &Path,
    levels: &[f64],
    out: &Path,
    grid_args: &GridArgs,
) -> Result<(), Failure> {
    if levels.is_empty() {
        return Err(Failure::Usage("contour needs at least one level".into()));
    }
    let sc = load_solution_config(config)?;
    let sol = sc.build().map_err(Failure::usage)?;
    let grid = build_grid([-2.0, 2.0, -2.0, 2.0], grid_args, (201, 201))?;
    let field = sample(&sol, &grid).map_err(Failure::usage)?;
    let set = contour(&field, &field.psi, levels);
    ensure_dir(out)?;
    write_csv(&set, &out.join("contours.csv")).map_err(Failure::usage)?;
    write_svg(&set, grid.window(), &out.join("contours.svg")).map_err(Failure::usage)?;
    println!("wrote {}", out.join("contours.svg").display());
    Ok(())
}
