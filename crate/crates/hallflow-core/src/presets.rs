//! The eight shipped figure presets, embedded from `presets/*.json`.

use crate::field::{Grid, Projection};
use crate::params::FluidParamsConfig;
use crate::solutions::{FamilyTag, FlowSolution, ShapeConstants, SolutionConfig, SolutionError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FIGURE_COUNT: u8 = 8;

const RAW: [&str; FIGURE_COUNT as usize] = [
    include_str!("../presets/figure1.json"),
    include_str!("../presets/figure2.json"),
    include_str!("../presets/figure3.json"),
    include_str!("../presets/figure4.json"),
    include_str!("../presets/figure5.json"),
    include_str!("../presets/figure6.json"),
    include_str!("../presets/figure7.json"),
    include_str!("../presets/figure8.json"),
];

#[derive(Debug, Error)]
pub enum PresetError {
    #[error("no preset for figure {0}; figures run 1..=8")]
    UnknownFigure(u8),
    #[error("preset parse failure: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Solution(#[from] SolutionError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FigurePreset {
    pub figure: u8,
    pub family: FamilyTag,
    pub params: FluidParamsConfig,
    pub shape_constants: ShapeConstants,
    pub window: [f64; 4],
    pub levels: Vec<f64>,
    #[serde(default)]
    pub notes: String,
}

impl FigurePreset {
    pub fn solution_config(&self) -> SolutionConfig {
        SolutionConfig {
            family: self.family,
            params: self.params.clone(),
            shape_constants: self.shape_constants.clone(),
        }
    }

    pub fn build(&self) -> Result<FlowSolution, SolutionError> {
        self.solution_config().build()
    }

    pub fn grid(&self, nx: usize, ny: usize, projection: Projection) -> Grid {
        Grid {
            x0: self.window[0],
            x1: self.window[1],
            y0: self.window[2],
            y1: self.window[3],
            nx,
            ny,
            projection,
        }
    }
}

pub fn figure_preset(n: u8) -> Result<FigurePreset, PresetError> {
    if !(1..=FIGURE_COUNT).contains(&n) {
        return Err(PresetError::UnknownFigure(n));
    }
    let preset: FigurePreset = serde_json::from_str(RAW[(n - 1) as usize])?;
    Ok(preset)
}
