//! JSON face of a [`FlowSolution`]: `{family, params, shape_constants}`.

use super::{
    build_family_a, build_family_b, build_family_c1, build_family_c2s1, build_family_c2s2,
    CaseA, FlowSolution, SolutionError,
};
use crate::params::FluidParamsConfig;
use crate::special::SeriesConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyTag {
    A1,
    A2,
    A3,
    B,
    C1,
    C2s1,
    C2s2,
}

impl std::fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FamilyTag::A1 => "A1",
            FamilyTag::A2 => "A2",
            FamilyTag::A3 => "A3",
            FamilyTag::B => "B",
            FamilyTag::C1 => "C1",
            FamilyTag::C2s1 => "C2s1",
            FamilyTag::C2s2 => "C2s2",
        };
        f.write_str(s)
    }
}

/// Family-specific constants. Unused fields are simply ignored by the
/// builder for the selected family.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ShapeConstants {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b_amp: Option<f64>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d_amp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_exp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(rename = "A3", default, skip_serializing_if = "Option::is_none")]
    pub a3: Option<f64>,
    #[serde(rename = "A4", default, skip_serializing_if = "Option::is_none")]
    pub a4: Option<f64>,
    #[serde(rename = "A5", default, skip_serializing_if = "Option::is_none")]
    pub a5: Option<f64>,
    #[serde(rename = "A6", default, skip_serializing_if = "Option::is_none")]
    pub a6: Option<f64>,
    #[serde(rename = "C1", default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(rename = "C2", default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(rename = "C3", default, skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
    #[serde(rename = "C4", default, skip_serializing_if = "Option::is_none")]
    pub c4: Option<f64>,
    #[serde(rename = "C5", default, skip_serializing_if = "Option::is_none")]
    pub c5: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_ref: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<f64>,
}

impl ShapeConstants {
    fn need(&self, field: Option<f64>, name: &str) -> Result<f64, SolutionError> {
        field.ok_or_else(|| SolutionError::BadShape(format!("missing shape constant {name:?}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionConfig {
    pub family: FamilyTag,
    pub params: FluidParamsConfig,
    pub shape_constants: ShapeConstants,
}

impl SolutionConfig {
    pub fn build(&self) -> Result<FlowSolution, SolutionError> {
        let params = self.params.build()?;
        let sc = &self.shape_constants;
        let p_ref = sc.p_ref.unwrap_or(0.0);
        match self.family {
            FamilyTag::A1 | FamilyTag::A2 | FamilyTag::A3 => {
                let a = sc.need(sc.a, "a")?;
                let case = match self.family {
                    FamilyTag::A1 => CaseA::Case1,
                    FamilyTag::A2 => CaseA::Case2,
                    _ => CaseA::Case3,
                };
                let b = match (self.family, sc.b) {
                    (FamilyTag::A1, None) => a,
                    (FamilyTag::A2, None) => -a,
                    (_, Some(b)) => b,
                    _ => return Err(SolutionError::BadShape("missing shape constant \"b\"".into())),
                };
                build_family_a(
                    &params,
                    case,
                    a,
                    b,
                    sc.need(sc.b_amp, "B")?,
                    sc.need(sc.d_amp, "D")?,
                    p_ref,
                )
            }
            FamilyTag::B => build_family_b(
                &params,
                sc.need(sc.sigma_exp, "sigma_exp")?,
                sc.need(sc.lambda, "lambda")?,
                p_ref,
            ),
            FamilyTag::C1 => build_family_c1(
                &params,
                [
                    sc.need(sc.a3, "A3")?,
                    sc.need(sc.a4, "A4")?,
                    sc.need(sc.a5, "A5")?,
                    sc.need(sc.a6, "A6")?,
                ],
                p_ref,
            ),
            FamilyTag::C2s1 => build_family_c2s1(
                &params,
                [
                    sc.need(sc.c1, "C1")?,
                    sc.need(sc.c2, "C2")?,
                    sc.need(sc.c3, "C3")?,
                    sc.need(sc.c4, "C4")?,
                ],
                p_ref,
            ),
            FamilyTag::C2s2 => build_family_c2s2(
                &params,
                sc.need(sc.lambda, "lambda")?,
                sc.need(sc.c5, "C5")?,
                sc.need(sc.c1, "C1")?,
                sc.anchor.unwrap_or(0.0),
                p_ref,
                SeriesConfig::default(),
                1e-12,
            ),
        }
    }
}
