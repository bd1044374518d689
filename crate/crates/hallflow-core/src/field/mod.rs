//! Grid sampling, contour extraction and figure emission.

mod contour;
mod emit;

pub use contour::contour;
pub use emit::{parse_csv, to_csv, to_svg, write_csv, write_svg};

use crate::solutions::{FlowSolution, SolutionError};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("every cell of the sampled field is masked")]
    EmptyField,
    #[error("evaluation failed at ({x}, {y}): {source}")]
    Eval {
        x: f64,
        y: f64,
        source: SolutionError,
    },
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed CSV at line {line}: {detail}")]
    Csv { line: usize, detail: String },
}

/// Scalar projection of a complex field value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    #[default]
    Real,
    Imag,
    #[serde(rename = "mod")]
    Modulus,
}

impl Projection {
    pub fn apply(self, z: Complex64) -> f64 {
        match self {
            Projection::Real => z.re,
            Projection::Imag => z.im,
            Projection::Modulus => z.norm(),
        }
    }
}

impl std::str::FromStr for Projection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "real" => Ok(Projection::Real),
            "imag" => Ok(Projection::Imag),
            "mod" | "modulus" => Ok(Projection::Modulus),
            other => Err(format!("unknown projection {other:?} (real|imag|mod)")),
        }
    }
}

/// Sampling window and resolution. Index layout is row-major with
/// `idx = j*nx + i` for the point `(x_i, y_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    #[serde(default)]
    pub projection: Projection,
}

impl Grid {
    pub fn new(
        window: [f64; 4],
        nx: usize,
        ny: usize,
        projection: Projection,
    ) -> Result<Grid, FieldError> {
        let g = Grid {
            x0: window[0],
            x1: window[1],
            y0: window[2],
            y1: window[3],
            nx,
            ny,
            projection,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        if self.nx < 2 || self.ny < 2 {
            return Err(FieldError::InvalidGrid(format!(
                "need nx, ny >= 2, got {}x{}",
                self.nx, self.ny
            )));
        }
        for v in [self.x0, self.x1, self.y0, self.y1] {
            if !v.is_finite() {
                return Err(FieldError::InvalidGrid("non-finite window".into()));
            }
        }
        if !(self.x1 > self.x0) || !(self.y1 > self.y0) {
            return Err(FieldError::InvalidGrid(format!(
                "degenerate window [{}, {}] x [{}, {}]",
                self.x0, self.x1, self.y0, self.y1
            )));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + (self.x1 - self.x0) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + (self.y1 - self.y0) * j as f64 / (self.ny - 1) as f64
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / (self.ny - 1) as f64
    }

    pub fn window(&self) -> [f64; 4] {
        [self.x0, self.x1, self.y0, self.y1]
    }
}

/// Projected field arrays with grid metadata; `mask[i] == false` marks an
/// evaluation-region hole (the value slots hold NaN there). Families without
/// a printed pressure leave `p` as NaN with the mask intact.
#[derive(Debug, Clone)]
pub struct FieldArrays {
    pub grid: Grid,
    pub psi: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
    pub mask: Vec<bool>,
}

/// Sample a solution on a grid. Evaluation-region errors become masked
/// cells; any other error aborts the sweep.
pub fn sample(sol: &FlowSolution, grid: &Grid) -> Result<FieldArrays, FieldError> {
    grid.validate()?;
    let proj = grid.projection;
    let rows: Result<Vec<_>, FieldError> = (0..grid.ny)
        .into_par_iter()
        .map(|j| {
            let y = grid.y(j);
            let mut row = Vec::with_capacity(grid.nx);
            for i in 0..grid.nx {
                let x = grid.x(i);
                match sol.eval_field(x, y) {
                    Ok(s) => {
                        let pr = s.project(proj);
                        row.push((pr.psi, pr.u, pr.v, pr.p.unwrap_or(f64::NAN), true));
                    }
                    Err(SolutionError::EvaluationRegion { .. }) => {
                        row.push((f64::NAN, f64::NAN, f64::NAN, f64::NAN, false));
                    }
                    Err(source) => return Err(FieldError::Eval { x, y, source }),
                }
            }
            Ok(row)
        })
        .collect();
    let rows = rows?;
    let n = grid.nx * grid.ny;
    let mut out = FieldArrays {
        grid: *grid,
        psi: Vec::with_capacity(n),
        u: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
        p: Vec::with_capacity(n),
        mask: Vec::with_capacity(n),
    };
    for row in rows {
        for (psi, u, v, p, ok) in row {
            out.psi.push(psi);
            out.u.push(u);
            out.v.push(v);
            out.p.push(p);
            out.mask.push(ok);
        }
    }
    if !out.mask.iter().any(|&m| m) {
        return Err(FieldError::EmptyField);
    }
    Ok(out)
}

/// How a set of level curves was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContourMethod {
    ClosedForm,
    MarchingSquares,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelCurves {
    pub level: f64,
    pub polylines: Vec<Vec<[f64; 2]>>,
}

/// Level values with traced polylines.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StreamlineSet {
    pub method: ContourMethod,
    pub levels: Vec<LevelCurves>,
}

impl StreamlineSet {
    pub fn empty(method: ContourMethod) -> Self {
        StreamlineSet {
            method,
            levels: Vec::new(),
        }
    }
}
