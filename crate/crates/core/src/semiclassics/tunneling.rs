//! WKB transmission through the barrier at the lowest hyperbolic point.

use crate::classical::{find_fixed_points, lowest_elliptic, lowest_hyperbolic, FixedPoint, FixedPointKind, ResonantModel};
use crate::error::{invalid, Error, Result};
use crate::quadrature::{bisect, integrate_adaptive};
use serde::{Deserialize, Serialize};

/// Barrier transmission formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TunnelingFormula {
    /// `T = 1/(1 + e^{2K})`, finite (1/2) at the barrier top.
    #[default]
    Kemble,
    /// `T = e^{−2K}`.
    Exponential,
}

impl TunnelingFormula {
    pub fn transmission(self, k: f64) -> f64 {
        match self {
            TunnelingFormula::Kemble => 1.0 / (1.0 + (2.0 * k).exp()),
            TunnelingFormula::Exponential => (-2.0 * k).exp(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TunnelingFormula::Kemble => "kemble",
            TunnelingFormula::Exponential => "exponential",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BarrierRegime {
    /// Finite forbidden interval `[left, right]` around the saddle.
    Barrier { left: f64, right: f64 },
    /// `E` at or above the separatrix: no barrier, boundary value reported.
    AboveSeparatrix,
    /// No classically allowed region on one side of the saddle inside the
    /// search window, so there is nowhere to tunnel to.
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingEstimate {
    pub probability: f64,
    /// Barrier action `K = (1/ħ) ∫ √((V + Λ − E)/α) dφ`.
    pub action: f64,
    pub regime: BarrierRegime,
}

const TURNING_TOL: f64 = 1e-12;

/// Elliptic points adjacent to `saddle` on each side, searched within one
/// period (pendulum) or the default window (0–π).
fn flanking_wells(model: &ResonantModel, saddle: f64) -> Result<(Option<FixedPoint>, Option<FixedPoint>)> {
    let window = match model.potential.period() {
        Some(period) => (saddle - period, saddle + period),
        None => model.default_window(),
    };
    // The saddle reappears in the rescan; skip it and its copies.
    let pts: Vec<FixedPoint> = find_fixed_points(model, window)?
        .into_iter()
        .filter(|f| (f.phi - saddle).abs() > 1e-8)
        .collect();
    let left = pts.iter().rfind(|f| f.phi < saddle).copied();
    let right = pts.iter().find(|f| f.phi > saddle).copied();
    let elliptic = |f: Option<FixedPoint>| f.filter(|f| f.kind == FixedPointKind::Elliptic);
    Ok((elliptic(left), elliptic(right)))
}

/// Forbidden interval around `saddle` at energy `e`. `V` is monotone between
/// the saddle and each flanking well, so each turning point is bracketed
/// once; `None` when a flanking well bottom lies above `e`.
fn forbidden_interval(model: &ResonantModel, e: f64, saddle: f64) -> Result<Option<(f64, f64)>> {
    let g = |x: f64| model.rest_energy(x) - e;
    match flanking_wells(model, saddle)? {
        (Some(l), Some(r)) if l.energy < e && r.energy < e => Ok(Some((
            bisect(g, l.phi, saddle, TURNING_TOL)?,
            bisect(g, saddle, r.phi, TURNING_TOL)?,
        ))),
        _ => Ok(None),
    }
}

/// `∫ₐᵇ √((V + Λ − E)/α) dφ`; the square-root zeros at both ends are
/// removed by `φ = a + u²` and `φ = b − u²` on the two halves.
pub fn barrier_integral(model: &ResonantModel, e: f64, a: f64, b: f64) -> Result<f64> {
    let alpha = model.alpha;
    let f = |x: f64| ((model.rest_energy(x) - e).max(0.0) / alpha).sqrt();
    let c = 0.5 * (a + b);
    let w = (c - a).sqrt();
    // Cancellation in V + Λ − E limits the integrand to about √(ε|E|/α).
    let noise = (16.0 * f64::EPSILON * e.abs().max(model.potential.scale()) / alpha).sqrt();
    let tol = (1e-13 * f(c) + noise) * (b - a);
    let left = integrate_adaptive(|u| 2.0 * u * f(a + u * u), 0.0, w, tol)?;
    let right = integrate_adaptive(|u| 2.0 * u * f(b - u * u), 0.0, w, tol)?;
    Ok(left + right)
}

/// Transmission through the barrier at the lowest hyperbolic fixed point.
pub fn wkb_tunneling_with(
    model: &ResonantModel,
    e: f64,
    hbar_eff: f64,
    formula: TunnelingFormula,
) -> Result<TunnelingEstimate> {
    if !(hbar_eff > 0.0 && hbar_eff.is_finite()) {
        return Err(invalid(format!("hbar_eff must be positive, got {hbar_eff}")));
    }
    if !e.is_finite() {
        return Err(invalid("energy must be finite"));
    }
    let floor = lowest_elliptic(model)?.energy;
    if e <= floor {
        return Err(invalid(format!("energy {e} is not above the potential minimum {floor}")));
    }
    let saddle = lowest_hyperbolic(model)?;
    if e >= saddle.energy {
        return Ok(TunnelingEstimate {
            probability: formula.transmission(0.0),
            action: 0.0,
            regime: BarrierRegime::AboveSeparatrix,
        });
    }
    let Some((a, b)) = forbidden_interval(model, e, saddle.phi)? else {
        return Ok(TunnelingEstimate {
            probability: 0.0,
            action: f64::INFINITY,
            regime: BarrierRegime::Unbounded,
        });
    };
    let k = barrier_integral(model, e, a, b)? / hbar_eff;
    Ok(TunnelingEstimate {
        probability: formula.transmission(k),
        action: k,
        regime: BarrierRegime::Barrier { left: a, right: b },
    })
}

/// Kemble transmission at energy `e`.
pub fn wkb_tunneling(model: &ResonantModel, e: f64, hbar_eff: f64) -> Result<f64> {
    Ok(wkb_tunneling_with(model, e, hbar_eff, TunnelingFormula::Kemble)?.probability)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TunnelingCurve {
    pub energies: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub model: ResonantModel,
    pub hbar_eff: f64,
    pub formula: TunnelingFormula,
}

/// Lowest energy at which both sides of the barrier hold allowed motion:
/// the higher of the two well bottoms flanking the saddle.
pub fn tunneling_floor(model: &ResonantModel) -> Result<f64> {
    let saddle = lowest_hyperbolic(model)?;
    match flanking_wells(model, saddle.phi)? {
        (Some(l), Some(r)) => Ok(l.energy.max(r.energy)),
        _ => Err(Error::NoSeparatrix("saddle is not flanked by two wells".into())),
    }
}

/// `points` energies spread evenly over `(floor, E_sx]`, where `floor` is
/// [`tunneling_floor`]; the last point sits on the separatrix.
pub fn tunneling_curve(
    model: &ResonantModel,
    points: usize,
    hbar_eff: f64,
    formula: TunnelingFormula,
) -> Result<TunnelingCurve> {
    if points < 2 {
        return Err(invalid("tunneling curve needs at least 2 points"));
    }
    let top = lowest_hyperbolic(model)?.energy;
    let floor = tunneling_floor(model)?;
    let energies: Vec<f64> = (1..=points)
        .map(|i| floor + (top - floor) * i as f64 / points as f64)
        .collect();
    let probabilities = energies
        .iter()
        .map(|&e| Ok(wkb_tunneling_with(model, e, hbar_eff, formula)?.probability))
        .collect::<Result<Vec<_>>>()?;
    Ok(TunnelingCurve {
        energies,
        probabilities,
        model: *model,
        hbar_eff,
        formula,
    })
}
