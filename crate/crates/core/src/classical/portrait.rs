//! Sampled phase portraits and level-set contours of `H_res`.

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::quadrature::bisect;

use super::fixed::{find_fixed_points, FixedPoint};
use super::model::ResonantModel;

pub const MIN_GRID: usize = 64;

/// One polyline of a level set; closed curves repeat their first point.
pub type Polyline = Vec<(f64, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub energy: f64,
    pub polylines: Vec<Polyline>,
}

impl Contour {
    pub fn point_count(&self) -> usize {
        self.polylines.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePortrait {
    pub phi: Vec<f64>,
    pub p: Vec<f64>,
    /// `values[j * phi.len() + i] = H(p[j], phi[i])`.
    pub values: Vec<f64>,
    pub contours: Vec<Contour>,
    pub fixed_points: Vec<FixedPoint>,
}

impl PhasePortrait {
    pub fn value_range(&self) -> (f64, f64) {
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// Grid layout of a portrait.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitGrid {
    pub phi_range: (f64, f64),
    pub p_max: f64,
    pub phi_points: usize,
    pub p_points: usize,
}

impl PortraitGrid {
    /// One period (pendulum) or the fixed-point window (0–π) in φ, and
    /// `±1.5` times the island half-width in P (at least 1).
    pub fn default_for(model: &ResonantModel) -> Self {
        let phi_range = match model.potential.period() {
            Some(period) => (-0.5 * period, 1.5 * period),
            None => model.default_window(),
        };
        let depth = super::fixed::island_half_width(model).unwrap_or(0.0);
        Self {
            phi_range,
            p_max: (1.5 * depth).max(1.0),
            phi_points: 257,
            p_points: 129,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    /// Between nodes `(i, j)` and `(i + 1, j)`.
    Horizontal(usize, usize),
    /// Between nodes `(i, j)` and `(i, j + 1)`.
    Vertical(usize, usize),
}

/// Samples `H_res` on the grid, extracts level sets at `energies` by
/// marching squares and attaches the fixed points inside the φ-range.
/// Crossing points are refined by bisection along grid edges, so they lie
/// on the exact level set rather than on the bilinear interpolant.
pub fn phase_portrait(model: &ResonantModel, grid: PortraitGrid, energies: &[f64]) -> Result<PhasePortrait> {
    let PortraitGrid {
        phi_range: (lo, hi),
        p_max,
        phi_points: nx,
        p_points: ny,
    } = grid;
    if nx < MIN_GRID || ny < MIN_GRID {
        return Err(invalid(format!("portrait grid must be at least {MIN_GRID}x{MIN_GRID}")));
    }
    if !(hi > lo) || !(p_max > 0.0) {
        return Err(invalid("portrait ranges must be non-empty"));
    }
    let phi: Vec<f64> = (0..nx).map(|i| lo + (hi - lo) * i as f64 / (nx - 1) as f64).collect();
    let p: Vec<f64> = (0..ny).map(|j| -p_max + 2.0 * p_max * j as f64 / (ny - 1) as f64).collect();
    let mut values = Vec::with_capacity(nx * ny);
    for &pj in &p {
        for &xi in &phi {
            values.push(model.energy(pj, xi));
        }
    }
    let contours = energies
        .iter()
        .map(|&e| Contour {
            energy: e,
            polylines: level_set(model, &phi, &p, &values, e),
        })
        .collect();
    let fixed_points = find_fixed_points(model, (lo, hi))?;
    Ok(PhasePortrait {
        phi,
        p,
        values,
        contours,
        fixed_points,
    })
}

fn level_set(model: &ResonantModel, phi: &[f64], p: &[f64], values: &[f64], e: f64) -> Vec<Polyline> {
    let nx = phi.len();
    let ny = p.len();
    let above = |i: usize, j: usize| values[j * nx + i] > e;

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let b = [above(i, j), above(i + 1, j), above(i + 1, j + 1), above(i, j + 1)];
            let edges = [
                EdgeKey::Horizontal(i, j),
                EdgeKey::Vertical(i + 1, j),
                EdgeKey::Horizontal(i, j + 1),
                EdgeKey::Vertical(i, j),
            ];
            // Edge k joins corners k and k + 1.
            let cut: Vec<usize> = (0..4).filter(|&k| b[k] != b[(k + 1) % 4]).collect();
            match cut.len() {
                2 => segments.push((edges[cut[0]], edges[cut[1]])),
                4 => {
                    let cx = 0.5 * (phi[i] + phi[i + 1]);
                    let cy = 0.5 * (p[j] + p[j + 1]);
                    let center = model.energy(cy, cx) > e;
                    if center == b[0] {
                        // Corners 1 and 3 are isolated.
                        segments.push((edges[0], edges[1]));
                        segments.push((edges[2], edges[3]));
                    } else {
                        segments.push((edges[3], edges[0]));
                        segments.push((edges[1], edges[2]));
                    }
                }
                _ => {}
            }
        }
    }
    if segments.is_empty() {
        return Vec::new();
    }

    let mut points: HashMap<EdgeKey, (f64, f64)> = HashMap::new();
    let mut locate = |k: EdgeKey| -> (f64, f64) {
        *points.entry(k).or_insert_with(|| {
            let (a, b) = match k {
                EdgeKey::Horizontal(i, j) => ((phi[i], p[j]), (phi[i + 1], p[j])),
                EdgeKey::Vertical(i, j) => ((phi[i], p[j]), (phi[i], p[j + 1])),
            };
            let at = |t: f64| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            let g = |t: f64| {
                let (x, y) = at(t);
                model.energy(y, x) - e
            };
            let t = bisect(g, 0.0, 1.0, 1e-14).unwrap_or(0.5);
            at(t)
        })
    };

    let mut incident: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        incident.entry(*a).or_default().push(s);
        incident.entry(*b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();

    let walk = |start_seg: usize, start_key: EdgeKey, used: &mut Vec<bool>| -> Vec<EdgeKey> {
        let mut keys = vec![start_key];
        let mut seg = start_seg;
        let mut key = start_key;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            key = if a == key { b } else { a };
            keys.push(key);
            match incident[&key].iter().copied().find(|&s| !used[s]) {
                Some(next) => seg = next,
                None => break,
            }
        }
        keys
    };

    // Open curves start at edges touched by a single segment.
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        for key in [segments[s].0, segments[s].1] {
            if !used[s] && incident[&key].len() == 1 {
                let keys = walk(s, key, &mut used);
                lines.push(keys.into_iter().map(&mut locate).collect());
            }
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            let keys = walk(s, segments[s].0, &mut used);
            lines.push(keys.into_iter().map(&mut locate).collect());
        }
    }
    lines
}
