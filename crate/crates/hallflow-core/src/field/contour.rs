//! Marching squares with linear edge interpolation.
//!
//! Cells touching a masked or non-finite corner are skipped, so polylines
//! never cross masked regions. Segment emission is cell-row-major and the
//! chain assembly walks segments in emission order, which makes the vertex
//! order deterministic for identical inputs.

use super::{ContourMethod, FieldArrays, LevelCurves, StreamlineSet};
use std::collections::HashMap;

type Pt = [f64; 2];

fn key(p: Pt) -> (u64, u64) {
    (p[0].to_bits(), p[1].to_bits())
}

/// Linear interpolation of the crossing on an edge from `(pa, va)` to
/// `(pb, vb)`; callers guarantee the edge straddles the level.
fn lerp(pa: Pt, va: f64, pb: Pt, vb: f64, level: f64) -> Pt {
    let t = (level - va) / (vb - va);
    [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
}

/// Trace the level set of `values` (the `psi` array of a sampled field).
pub fn contour(field: &FieldArrays, values: &[f64], levels: &[f64]) -> StreamlineSet {
    let grid = &field.grid;
    let mut out = StreamlineSet::empty(ContourMethod::MarchingSquares);
    for &level in levels {
        let mut segments: Vec<(Pt, Pt)> = Vec::new();
        for j in 0..grid.ny - 1 {
            for i in 0..grid.nx - 1 {
                let idx = |ii: usize, jj: usize| jj * grid.nx + ii;
                let corners = [
                    (i, j),         // bottom-left
                    (i + 1, j),     // bottom-right
                    (i + 1, j + 1), // top-right
                    (i, j + 1),     // top-left
                ];
                if corners
                    .iter()
                    .any(|&(ii, jj)| !field.mask[idx(ii, jj)] || !values[idx(ii, jj)].is_finite())
                {
                    continue;
                }
                let v: Vec<f64> = corners.iter().map(|&(ii, jj)| values[idx(ii, jj)]).collect();
                let p: Vec<Pt> = corners
                    .iter()
                    .map(|&(ii, jj)| [grid.x(ii), grid.y(jj)])
                    .collect();
                let mut case = 0usize;
                for (bit, &val) in v.iter().enumerate() {
                    if val > level {
                        case |= 1 << bit;
                    }
                }
                if case == 0 || case == 15 {
                    continue;
                }
                // edge crossings: 0 bottom, 1 right, 2 top, 3 left
                let edge = |e: usize| -> Pt {
                    match e {
                        0 => lerp(p[0], v[0], p[1], v[1], level),
                        1 => lerp(p[1], v[1], p[2], v[2], level),
                        2 => lerp(p[3], v[3], p[2], v[2], level),
                        _ => lerp(p[0], v[0], p[3], v[3], level),
                    }
                };
                let mut emit = |ea: usize, eb: usize| {
                    let a = edge(ea);
                    let b = edge(eb);
                    if a != b {
                        segments.push((a, b));
                    }
                };
                match case {
                    1 => emit(3, 0),
                    2 => emit(0, 1),
                    3 => emit(3, 1),
                    4 => emit(1, 2),
                    5 => {
                        // saddle: disambiguate with the cell-centre average
                        let centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                        if centre > level {
                            emit(3, 2);
                            emit(0, 1);
                        } else {
                            emit(3, 0);
                            emit(1, 2);
                        }
                    }
                    6 => emit(0, 2),
                    7 => emit(3, 2),
                    8 => emit(2, 3),
                    9 => emit(2, 0),
                    10 => {
                        let centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                        if centre > level {
                            emit(0, 3);
                            emit(1, 2);
                        } else {
                            emit(0, 1);
                            emit(2, 3);
                        }
                    }
                    11 => emit(1, 2),
                    12 => emit(1, 3),
                    13 => emit(0, 1),
                    14 => emit(0, 3),
                    _ => unreachable!(),
                }
            }
        }
        out.levels.push(LevelCurves {
            level,
            polylines: chain(segments),
        });
    }
    out
}

/// Join segments into polylines. Endpoints produced from the same grid edge
/// are bit-identical, so exact keys suffice.
fn chain(segments: Vec<(Pt, Pt)>) -> Vec<Vec<Pt>> {
    let mut by_start: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    let mut by_end: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        by_start.entry(key(*a)).or_default().push(idx);
        by_end.entry(key(*b)).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for seed in 0..segments.len() {
        if used[seed] {
            continue;
        }
        used[seed] = true;
        let (a, b) = segments[seed];
        let mut line = vec![a, b];
        // extend forward
        loop {
            let tail = key(*line.last().unwrap());
            let next = by_start
                .get(&tail)
                .and_then(|v| v.iter().find(|&&i| !used[i]))
                .copied();
            match next {
                Some(i) => {
                    used[i] = true;
                    line.push(segments[i].1);
                }
                None => break,
            }
        }
        // extend backward
        loop {
            let head = key(line[0]);
            let prev = by_end
                .get(&head)
                .and_then(|v| v.iter().find(|&&i| !used[i]))
                .copied();
            match prev {
                Some(i) => {
                    used[i] = true;
                    line.insert(0, segments[i].0);
                }
                None => break,
            }
        }
        polylines.push(line);
    }
    polylines
}
