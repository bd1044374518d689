//! CSV and SVG emission, byte-deterministic for identical inputs.

use super::{ContourMethod, FieldError, LevelCurves, StreamlineSet};
use std::fmt::Write as _;
use std::path::Path;

/// 17-significant-digit decimal form, stable across runs.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV with columns (level, seq, x, y); `seq` restarts at 0 on each
/// polyline, which is what separates polylines on parse.
pub fn to_csv(set: &StreamlineSet) -> String {
    let mut out = String::from("level,seq,x,y\n");
    for lc in &set.levels {
        for poly in &lc.polylines {
            for (seq, p) in poly.iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{}", num(lc.level), seq, num(p[0]), num(p[1]));
            }
        }
    }
    out
}

pub fn write_csv(set: &StreamlineSet, path: &Path) -> Result<(), FieldError> {
    std::fs::write(path, to_csv(set)).map_err(|source| FieldError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Inverse of [`to_csv`]; the method tag is not stored in the file.
pub fn parse_csv(text: &str) -> Result<StreamlineSet, FieldError> {
    let mut set = StreamlineSet::empty(ContourMethod::MarchingSquares);
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "level,seq,x,y")) => {}
        other => {
            return Err(FieldError::Csv {
                line: 1,
                detail: format!("expected header 'level,seq,x,y', got {other:?}"),
            })
        }
    }
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let mut next = |name: &str| {
            cols.next().ok_or(FieldError::Csv {
                line: lineno + 1,
                detail: format!("missing column {name}"),
            })
        };
        let level: f64 = next("level")?.parse().map_err(|e| FieldError::Csv {
            line: lineno + 1,
            detail: format!("bad level: {e}"),
        })?;
        let seq: usize = next("seq")?.parse().map_err(|e| FieldError::Csv {
            line: lineno + 1,
            detail: format!("bad seq: {e}"),
        })?;
        let x: f64 = next("x")?.parse().map_err(|e| FieldError::Csv {
            line: lineno + 1,
            detail: format!("bad x: {e}"),
        })?;
        let y: f64 = next("y")?.parse().map_err(|e| FieldError::Csv {
            line: lineno + 1,
            detail: format!("bad y: {e}"),
        })?;
        if set.levels.last().map(|lc| lc.level) != Some(level) {
            set.levels.push(LevelCurves {
                level,
                polylines: Vec::new(),
            });
        }
        let lc = set.levels.last_mut().unwrap();
        if seq == 0 {
            lc.polylines.push(Vec::new());
        }
        let poly = lc.polylines.last_mut().ok_or(FieldError::Csv {
            line: lineno + 1,
            detail: "first row of a level must have seq = 0".into(),
        })?;
        if poly.len() != seq {
            return Err(FieldError::Csv {
                line: lineno + 1,
                detail: format!("seq {seq} out of order (expected {})", poly.len()),
            });
        }
        poly.push([x, y]);
    }
    Ok(set)
}

const PALETTE: [&str; 8] = [
    "#1b6ca8", "#c0392b", "#1e8449", "#8e44ad", "#d68910", "#17a589", "#7d6608", "#283747",
];

/// One `<path>` per polyline inside a y-up group; the viewBox matches the
/// grid window exactly.
pub fn to_svg(set: &StreamlineSet, window: [f64; 4]) -> String {
    let [x0, x1, y0, y1] = window;
    let (w, h) = (x1 - x0, y1 - y0);
    let stroke_w = (w.max(h)) / 400.0;
    let font = (w.max(h)) / 40.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0} {y0} {w} {h}\">"
    );
    let _ = writeln!(
        out,
        "  <g transform=\"translate(0,{}) scale(1,-1)\">",
        y0 + y1
    );
    for (k, lc) in set.levels.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        for poly in &lc.polylines {
            if poly.len() < 2 {
                continue;
            }
            let mut d = String::new();
            for (i, p) in poly.iter().enumerate() {
                let _ = write!(d, "{}{:.6} {:.6}", if i == 0 { "M" } else { " L" }, p[0], p[1]);
            }
            let _ = writeln!(
                out,
                "    <path fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke_w:.6}\" d=\"{d}\"/>"
            );
        }
    }
    let _ = writeln!(out, "  </g>");
    for (k, lc) in set.levels.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        if let Some(p) = lc.polylines.iter().find_map(|poly| poly.first()) {
            let _ = writeln!(
                out,
                "  <text x=\"{:.6}\" y=\"{:.6}\" font-size=\"{font:.6}\" fill=\"{color}\">{}</text>",
                p[0],
                y0 + y1 - p[1],
                lc.level
            );
        }
    }
    let _ = writeln!(out, "</svg>");
    out
}

pub fn write_svg(set: &StreamlineSet, window: [f64; 4], path: &Path) -> Result<(), FieldError> {
    std::fs::write(path, to_svg(set, window)).map_err(|source| FieldError::Io {
        path: path.display().to_string(),
        source,
    })
}
