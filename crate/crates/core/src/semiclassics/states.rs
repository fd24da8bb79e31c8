//! Quantized levels of `H_res` on a discrete-variable grid.

use std::f64::consts::PI;

use crate::circuit::{HermitianOperator, OperatorBasis};
use crate::classical::{ResonantModel, ZERO_PI_WINDOW};
use crate::error::{invalid, Error, Result};
use crate::spectrum::eigendecompose;
use serde::Serialize;

/// Level shift tolerated when the grid is doubled.
pub const RESOLUTION_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_STATE_POINTS: usize = 255;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateBoundary {
    /// One period of a periodic potential, Fourier grid.
    Periodic,
    /// Hard walls at `±halfwidth`, sine grid.
    Box { halfwidth: f64 },
}

impl StateBoundary {
    pub fn name(&self) -> &'static str {
        match self {
            StateBoundary::Periodic => "periodic",
            StateBoundary::Box { .. } => "box",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateGrid {
    pub boundary: StateBoundary,
    pub points: usize,
}

impl StateGrid {
    /// Periodic for pendulums, a box over the 0–π fixed-point window otherwise.
    pub fn default_for(model: &ResonantModel) -> Self {
        let boundary = match model.potential.period() {
            Some(_) => StateBoundary::Periodic,
            None => StateBoundary::Box {
                halfwidth: ZERO_PI_WINDOW.1,
            },
        };
        Self {
            boundary,
            points: DEFAULT_STATE_POINTS,
        }
    }

    /// Grid with half the spacing over the same domain.
    pub fn refined(&self) -> Self {
        Self {
            boundary: self.boundary,
            points: 2 * self.points + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonantStates {
    pub energies: Vec<f64>,
    pub nodes: Vec<f64>,
    pub spacing: f64,
    /// Real wavefunctions on `nodes`, normalized so `spacing · Σ ψ² = 1`.
    pub amplitudes: Vec<Vec<f64>>,
    /// `V(φ) + Λ` on `nodes`.
    pub potential: Vec<f64>,
    pub grid: StateGrid,
    pub hbar_eff: f64,
    /// Largest change of the returned levels under grid doubling.
    pub resolution_shift: f64,
}

impl ResonantStates {
    pub fn density(&self, k: usize) -> Vec<f64> {
        self.amplitudes[k].iter().map(|a| a * a).collect()
    }

    /// `spacing · Σ ψ_a ψ_b`.
    pub fn overlap(&self, a: usize, b: usize) -> f64 {
        self.spacing
            * self.amplitudes[a]
                .iter()
                .zip(&self.amplitudes[b])
                .map(|(x, y)| x * y)
                .sum::<f64>()
    }
}

struct Discretization {
    nodes: Vec<f64>,
    spacing: f64,
    /// Row-major kinetic matrix for `−d²/dφ²`.
    kinetic: Vec<f64>,
}

fn fourier_grid(period: f64, points: usize) -> Discretization {
    let n = points;
    let m = (n - 1) / 2;
    let spacing = period / n as f64;
    let nodes = (0..n).map(|j| j as f64 * spacing).collect();
    let kern: Vec<f64> = (0..n)
        .map(|d| {
            (1..=m)
                .map(|q| {
                    let kq = 2.0 * PI * q as f64 / period;
                    2.0 * kq * kq * (2.0 * PI * (q * d) as f64 / n as f64).cos()
                })
                .sum::<f64>()
                / n as f64
        })
        .collect();
    let mut kinetic = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let d = i.abs_diff(j);
            kinetic[i * n + j] = kern[d.min(n - d)];
        }
    }
    Discretization { nodes, spacing, kinetic }
}

fn sine_grid(halfwidth: f64, points: usize) -> Discretization {
    let n = points;
    let len = 2.0 * halfwidth;
    let spacing = len / (n + 1) as f64;
    let nodes = (1..=n).map(|i| -halfwidth + i as f64 * spacing).collect();
    // sin a sin b = (cos(a − b) − cos(a + b))/2 reduces the sum to one
    // cosine kernel in i ± j.
    let kern: Vec<f64> = (0..=2 * n + 2)
        .map(|d| {
            (1..=n)
                .map(|q| {
                    let kq = q as f64 * PI / len;
                    kq * kq * (PI * (q * d) as f64 / (n + 1) as f64).cos()
                })
                .sum::<f64>()
                / (n + 1) as f64
        })
        .collect();
    let mut kinetic = vec![0.0; n * n];
    for i in 1..=n {
        for j in 1..=n {
            kinetic[(i - 1) * n + (j - 1)] = kern[i.abs_diff(j)] - kern[i + j];
        }
    }
    Discretization { nodes, spacing, kinetic }
}

fn discretize(model: &ResonantModel, grid: &StateGrid) -> Result<Discretization> {
    match grid.boundary {
        StateBoundary::Periodic => {
            let period = model
                .potential
                .period()
                .ok_or_else(|| invalid("periodic boundary needs a periodic potential"))?;
            if grid.points.is_multiple_of(2) {
                return Err(invalid("periodic grid needs an odd point count"));
            }
            Ok(fourier_grid(period, grid.points))
        }
        StateBoundary::Box { halfwidth } => {
            if !(halfwidth > 0.0 && halfwidth.is_finite()) {
                return Err(invalid(format!("box halfwidth must be positive, got {halfwidth}")));
            }
            Ok(sine_grid(halfwidth, grid.points))
        }
    }
}

fn solve_on(model: &ResonantModel, grid: &StateGrid, count: usize, hbar: f64, vectors: bool) -> Result<(Discretization, Vec<f64>, Vec<Vec<f64>>)> {
    let mut d = discretize(model, grid)?;
    let n = d.nodes.len();
    let c = hbar * hbar * model.alpha;
    for v in d.kinetic.iter_mut() {
        *v *= c;
    }
    for (i, &x) in d.nodes.iter().enumerate() {
        d.kinetic[i * n + i] += model.rest_energy(x);
    }
    let op = HermitianOperator::from_dense(n, &d.kinetic, OperatorBasis::Grid { nodes: d.nodes.clone() })?;
    let spec = eigendecompose(&op, vectors)?;
    let energies = spec.levels()[..count].to_vec();
    let norm = d.spacing.sqrt();
    let amplitudes = if vectors {
        (0..count)
            .map(|k| {
                let v = spec.vector(k).expect("vectors requested");
                // Fix the sign so the largest component is positive.
                let big = v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
                let s = if big < 0.0 { -1.0 } else { 1.0 };
                v.iter().map(|x| s * x / norm).collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok((d, energies, amplitudes))
}

/// Lowest `count` levels and wavefunctions of `ħ²α(−d²/dφ²) + V + Λ`.
/// The grid is re-solved at half spacing; a level moving by more than
/// [`RESOLUTION_TOLERANCE`] is reported as [`Error::ResolutionFailure`].
pub fn solve_resonant_states(
    model: &ResonantModel,
    grid: StateGrid,
    count: usize,
    hbar_eff: f64,
) -> Result<ResonantStates> {
    model.validate()?;
    if !(hbar_eff > 0.0 && hbar_eff.is_finite()) {
        return Err(invalid(format!("hbar_eff must be positive, got {hbar_eff}")));
    }
    if count == 0 || count > grid.points {
        return Err(invalid(format!("state count must be in 1..={}", grid.points)));
    }
    let (d, energies, amplitudes) = solve_on(model, &grid, count, hbar_eff, true)?;
    let (_, fine, _) = solve_on(model, &grid.refined(), count, hbar_eff, false)?;
    let shift = energies
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if !(shift <= RESOLUTION_TOLERANCE) {
        return Err(Error::ResolutionFailure {
            shift,
            tolerance: RESOLUTION_TOLERANCE,
        });
    }
    let potential = d.nodes.iter().map(|&x| model.rest_energy(x)).collect();
    Ok(ResonantStates {
        energies,
        nodes: d.nodes,
        spacing: d.spacing,
        amplitudes,
        potential,
        grid,
        hbar_eff,
        resolution_shift: shift,
    })
}
