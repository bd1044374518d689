//! Parameter sweeps: build the solution per value, evaluate point
//! observables and the compatibility residual, tabulate CSV rows.
//!
//! Family-A sweeps construct the ansatz ungated (the Case-3 constraint is
//! generally broken mid-sweep); the per-row residual column carries the
//! honest consequence.

use crate::Failure;
use hallflow_core::field::{Grid, Projection};
use hallflow_core::params::{FluidParamsConfig, Permeability};
use hallflow_core::solutions::{
    build_family_a_unconstrained, FamilyTag, FlowSolution, ShapeConstants, SolutionConfig,
};
use hallflow_core::verify::{compatibility_residual, FdOptions, OperatorCoeffs};
use serde::Deserialize;
use std::path::Path;

#[derive(Deserialize)]
pub struct SweepConfig {
    pub family: FamilyTag,
    pub params: FluidParamsConfig,
    pub shape_constants: ShapeConstants,
    pub sweep: SweepSpec,
    /// Evaluation point for the observables; (0, 0) by default.
    pub at: Option<[f64; 2]>,
    pub window: Option<[f64; 4]>,
    pub grid: Option<[usize; 2]>,
}

#[derive(Deserialize)]
pub struct SweepSpec {
    /// Exactly one swept parameter.
    pub param: String,
    pub values: Vec<serde_json::Value>,
}

fn apply_value(
    cfg: &mut SolutionConfig,
    param: &str,
    value: &serde_json::Value,
) -> Result<f64, String> {
    // permeability accepts "inf"; everything else is numeric
    if param == "K" {
        let k: Permeability =
            serde_json::from_value(value.clone()).map_err(|e| format!("bad K value: {e}"))?;
        cfg.params.permeability = k;
        return Ok(match k {
            Permeability::Finite(v) => v,
            Permeability::Infinite => f64::INFINITY,
        });
    }
    let v = value
        .as_f64()
        .ok_or_else(|| format!("value {value} for {param:?} is not a number"))?;
    let sc = &mut cfg.shape_constants;
    match param {
        "rho" => cfg.params.rho = v,
        "mu" => cfg.params.mu = v,
        "alpha1" => cfg.params.alpha1 = v,
        "alpha2" => cfg.params.alpha2 = v,
        "sigma_b0_sq" => {
            cfg.params.sigma_b0_sq = Some(v);
            cfg.params.sigma = None;
            cfg.params.b0 = None;
        }
        "phi" => cfg.params.phi = v,
        "a" => sc.a = Some(v),
        "b" => sc.b = Some(v),
        "B" => sc.b_amp = Some(v),
        "D" => sc.d_amp = Some(v),
        "sigma_exp" => sc.sigma_exp = Some(v),
        "lambda" => sc.lambda = Some(v),
        other => return Err(format!("unknown sweep parameter {other:?}")),
    }
    Ok(v)
}

fn build_for_sweep(cfg: &SolutionConfig) -> Result<FlowSolution, String> {
    match cfg.family {
        FamilyTag::A1 | FamilyTag::A2 | FamilyTag::A3 => {
            let sc = &cfg.shape_constants;
            let params = cfg.params.build().map_err(|e| e.to_string())?;
            let a = sc.a.ok_or("missing shape constant \"a\"")?;
            let b = match (sc.b, cfg.family) {
                (Some(b), _) => b,
                (None, FamilyTag::A1) => a,
                (None, FamilyTag::A2) => -a,
                (None, _) => return Err("missing shape constant \"b\"".into()),
            };
            build_family_a_unconstrained(
                &params,
                a,
                b,
                sc.b_amp.ok_or("missing shape constant \"B\"")?,
                sc.d_amp.ok_or("missing shape constant \"D\"")?,
            )
            .map_err(|e| e.to_string())
        }
        _ => cfg.build().map_err(|e| e.to_string()),
    }
}

pub fn cmd_sweep(config: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", config.display())))?;
    let sweep_cfg: SweepConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("bad sweep config: {e}")))?;
    if sweep_cfg.sweep.values.is_empty() {
        return Err(Failure::Usage("sweep value range is empty".into()));
    }
    let (x0, y0) = sweep_cfg.at.map(|p| (p[0], p[1])).unwrap_or((0.0, 0.0));
    let window = sweep_cfg.window.unwrap_or([-1.0, 1.0, -1.0, 1.0]);
    let [nx, ny] = sweep_cfg.grid.unwrap_or([5, 5]);
    let grid = Grid::new(window, nx, ny, Projection::Real).map_err(Failure::usage)?;

    let mut csv = String::from("param,value,u_re,u_im,v_re,v_im,speed_re,residual_rel_max,error\n");
    let param = sweep_cfg.sweep.param.clone();
    for value in &sweep_cfg.sweep.values {
        let mut cfg = SolutionConfig {
            family: sweep_cfg.family,
            params: sweep_cfg.params.clone(),
            shape_constants: sweep_cfg.shape_constants.clone(),
        };
        let row = apply_value(&mut cfg, &param, value)
            .and_then(|v| build_for_sweep(&cfg).map(|sol| (v, sol)));
        match row {
            Ok((v, sol)) => {
                let sample = sol.eval_field(x0, y0).map_err(Failure::usage)?;
                let coeffs = OperatorCoeffs::from_params(sol.fluid());
                let report = compatibility_residual(&sol, &coeffs, &grid, &FdOptions::default())
                    .map_err(Failure::usage)?;
                let speed = sample.u.re.hypot(sample.v.re);
                csv.push_str(&format!(
                    "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},\n",
                    param,
                    v,
                    sample.u.re,
                    sample.u.im,
                    sample.v.re,
                    sample.v.im,
                    speed,
                    report.analytic.rel_max,
                ));
            }
            Err(msg) => {
                // singular values mid-range become row-level markers
                csv.push_str(&format!("{param},{value},,,,,,,\"{msg}\"\n"));
            }
        }
    }
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join("sweep.csv");
            std::fs::write(&path, csv).map_err(Failure::usage)?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}
