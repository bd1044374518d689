//! Machine-readable report shapes written by the commands.

use hallflow_core::verify::ConcordanceFlag;
use serde::Serialize;

#[derive(Serialize)]
pub struct FigureReport {
    pub figure: u8,
    pub family: String,
    pub window: [f64; 4],
    pub levels: Vec<f64>,
    pub analytic_rel_re: f64,
    pub analytic_rel_im: f64,
    pub fd_rel_re: f64,
    pub fd_rel_im: f64,
    pub momentum_x_rel: f64,
    pub momentum_y_rel: f64,
    pub concordance: ConcordanceFlag,
    pub tolerance_analytic: f64,
    pub tolerance_fd: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub subject: String,
    pub analytic_rel_re: f64,
    pub analytic_rel_im: f64,
    pub fd_rel_re: f64,
    pub fd_rel_im: f64,
    pub excluded_points: usize,
    pub tolerance_analytic: f64,
    pub tolerance_fd: f64,
    pub passed: bool,
}
