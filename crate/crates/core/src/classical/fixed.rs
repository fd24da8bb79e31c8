//! Fixed points, separatrices and islands of a reduced model.

use crate::error::{invalid, Error, Result};
use crate::quadrature::{bisect, integrate_adaptive};

use serde::Serialize;

use super::model::ResonantModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointKind {
    Elliptic,
    Hyperbolic,
    /// `V'' = 0` at the root; not classified.
    Degenerate,
}

impl FixedPointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FixedPointKind::Elliptic => "elliptic",
            FixedPointKind::Hyperbolic => "hyperbolic",
            FixedPointKind::Degenerate => "degenerate",
        }
    }
}

/// Equilibrium `(φ*, P* = 0)` of `H_res`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub phi: f64,
    pub p: f64,
    pub energy: f64,
    pub kind: FixedPointKind,
}

const SCAN_SAMPLES: usize = 4096;
const ROOT_TOL: f64 = 1e-10;

/// Roots of `V'` in `[lo, hi]` by sign scan and bisection, classified by the
/// sign of `V''`. When the window spans exactly one period, a root at `hi`
/// that repeats one at `lo` is reported once.
pub fn find_fixed_points(model: &ResonantModel, window: (f64, f64)) -> Result<Vec<FixedPoint>> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(invalid(format!("bad search window [{lo}, {hi}]")));
    }
    let pot = model.potential;
    let dv = |x: f64| pot.derivative(x);
    let scale = pot.scale().max(f64::MIN_POSITIVE);
    let step = (hi - lo) / SCAN_SAMPLES as f64;

    let mut roots: Vec<f64> = Vec::new();
    let push = |x: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|&r| (x - r).abs() > 10.0 * ROOT_TOL) {
            roots.push(x);
        }
    };
    let mut x0 = lo;
    let mut f0 = dv(x0);
    if f0 == 0.0 {
        push(x0, &mut roots);
    }
    for i in 1..=SCAN_SAMPLES {
        let x1 = if i == SCAN_SAMPLES { hi } else { lo + i as f64 * step };
        let f1 = dv(x1);
        if f1 == 0.0 {
            push(x1, &mut roots);
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            push(bisect(dv, x0, x1, ROOT_TOL)?, &mut roots);
        }
        x0 = x1;
        f0 = f1;
    }
    if let Some(period) = pot.period().filter(|&t| (hi - lo - t).abs() <= 1e-9 * t) {
        if roots.len() >= 2 {
            let (first, last) = (roots[0], roots[roots.len() - 1]);
            if (last - first - period).abs() < 1e-8 {
                roots.pop();
            }
        }
    }
    // Constant potentials have V' = 0 everywhere: no isolated equilibria.
    if pot.scale() == 0.0 {
        roots.clear();
    }

    Ok(roots
        .into_iter()
        .map(|phi| {
            let curv = pot.second_derivative(phi);
            let kind = if curv.abs() <= 1e-12 * scale {
                FixedPointKind::Degenerate
            } else if curv > 0.0 {
                FixedPointKind::Elliptic
            } else {
                FixedPointKind::Hyperbolic
            };
            FixedPoint {
                phi,
                p: 0.0,
                energy: model.rest_energy(phi),
                kind,
            }
        })
        .collect())
}

fn lowest(points: &[FixedPoint], kind: FixedPointKind) -> Option<FixedPoint> {
    points
        .iter()
        .filter(|f| f.kind == kind)
        .min_by(|a, b| a.energy.total_cmp(&b.energy).then(a.phi.abs().total_cmp(&b.phi.abs())))
        .copied()
}

/// Lowest-energy elliptic point in the model's default window.
pub fn lowest_elliptic(model: &ResonantModel) -> Result<FixedPoint> {
    let pts = find_fixed_points(model, model.default_window())?;
    lowest(&pts, FixedPointKind::Elliptic).ok_or_else(|| invalid("model has no elliptic fixed point"))
}

/// Lowest-energy hyperbolic point in the model's default window.
pub fn lowest_hyperbolic(model: &ResonantModel) -> Result<FixedPoint> {
    let pts = find_fixed_points(model, model.default_window())?;
    lowest(&pts, FixedPointKind::Hyperbolic)
        .ok_or_else(|| Error::NoSeparatrix("no hyperbolic fixed point in the search window".into()))
}

/// Energy of the lowest hyperbolic fixed point.
pub fn separatrix_energy(model: &ResonantModel) -> Result<f64> {
    Ok(lowest_hyperbolic(model)?.energy)
}

/// Separatrix energy minus the lowest elliptic energy.
pub fn island_depth(model: &ResonantModel) -> Result<f64> {
    Ok(separatrix_energy(model)? - lowest_elliptic(model)?.energy)
}

/// Momentum extent of the separatrix above the elliptic point:
/// `√((E_sx − E_ell)/α)`, i.e. `√(2A/α)` for a pendulum.
pub fn island_half_width(model: &ResonantModel) -> Result<f64> {
    Ok((island_depth(model)? / model.alpha).sqrt())
}

/// Closed-form separatrix action of a pendulum, `8 √(2|A|/α) / |k|`.
pub fn pendulum_separatrix_action(model: &ResonantModel) -> Result<f64> {
    match model.potential {
        super::model::Potential::Pendulum { amplitude, wavenumber } => {
            Ok(8.0 * (2.0 * amplitude.abs() / model.alpha).sqrt() / wavenumber.unsigned_abs() as f64)
        }
        _ => Err(invalid("closed-form separatrix action is defined for pendulum models")),
    }
}

/// `∮ P dφ` around the orbit of energy `e` whose turning points are `left`
/// and `right`, by adaptive quadrature.
pub fn orbit_action(model: &ResonantModel, e: f64, left: f64, right: f64) -> Result<f64> {
    let p = |x: f64| ((e - model.rest_energy(x)).max(0.0) / model.alpha).sqrt();
    Ok(2.0 * integrate_adaptive(p, left, right, 1e-12)?)
}

/// Separatrix action by quadrature between the two hyperbolic points that
/// bound the lowest elliptic well.
pub fn separatrix_action(model: &ResonantModel) -> Result<f64> {
    let ell = lowest_elliptic(model)?;
    let e = separatrix_energy(model)?;
    let (left, right) = match model.potential.period() {
        Some(period) => {
            let hyp = lowest_hyperbolic(model)?.phi;
            let mut l = hyp;
            while l > ell.phi {
                l -= period;
            }
            while l + period < ell.phi {
                l += period;
            }
            (l, l + period)
        }
        None => {
            let pts = find_fixed_points(model, model.default_window())?;
            let l = pts.iter().rfind(|f| f.phi < ell.phi && f.kind == FixedPointKind::Hyperbolic);
            let r = pts.iter().find(|f| f.phi > ell.phi && f.kind == FixedPointKind::Hyperbolic);
            match (l, r) {
                (Some(l), Some(r)) => (l.phi, r.phi),
                _ => return Err(Error::NoSeparatrix("elliptic well is not bounded by two saddles".into())),
            }
        }
    };
    orbit_action(model, e, left, right)
}
