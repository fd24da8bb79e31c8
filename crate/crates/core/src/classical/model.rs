//! Resonance selectors and the reduced one-degree-of-freedom models.

use std::f64::consts::PI;

use crate::circuit::{CircuitFamily, CircuitSpec};
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};

/// Integers `(m, n, l1, l2)` of an `m:n` resonance with `m·l2 − n·l1 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSelector", into = "RawSelector")]
pub struct ResonanceSelector {
    m: u32,
    n: u32,
    l1: i32,
    l2: i32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSelector {
    m: u32,
    n: u32,
    l1: i32,
    l2: i32,
}

impl TryFrom<RawSelector> for ResonanceSelector {
    type Error = Error;
    fn try_from(r: RawSelector) -> Result<Self> {
        Self::new(r.m, r.n, r.l1, r.l2)
    }
}

impl From<ResonanceSelector> for RawSelector {
    fn from(s: ResonanceSelector) -> Self {
        Self { m: s.m, n: s.n, l1: s.l1, l2: s.l2 }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl ResonanceSelector {
    pub fn new(m: u32, n: u32, l1: i32, l2: i32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(invalid("resonance orders m, n must be positive"));
        }
        if gcd(m, n) != 1 {
            return Err(invalid(format!("resonance orders {m}:{n} are not coprime")));
        }
        if m as i64 * l2 as i64 - n as i64 * l1 as i64 != 1 {
            return Err(invalid(format!("m*l2 - n*l1 must equal 1 for ({m}, {n}, {l1}, {l2})")));
        }
        Ok(Self { m, n, l1, l2 })
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn l1(&self) -> i32 {
        self.l1
    }
    pub fn l2(&self) -> i32 {
        self.l2
    }
}

impl Default for ResonanceSelector {
    /// The 1:1 resonance with `l1 = 1`, `l2 = 2`.
    fn default() -> Self {
        Self { m: 1, n: 1, l1: 1, l2: 2 }
    }
}

/// Potential of a reduced model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// `amplitude · cos(wavenumber · φ)`.
    Pendulum { amplitude: f64, wavenumber: i32 },
    /// `E_L (π² + 3Φ²)/3 − E_J cos(Φ + φ_ext)`.
    ZeroPi { el: f64, ej: f64, phi_ext: f64 },
}

impl Potential {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Potential::Pendulum { amplitude, wavenumber } => amplitude * (wavenumber as f64 * x).cos(),
            Potential::ZeroPi { el, ej, phi_ext } => el * (PI * PI / 3.0 + x * x) - ej * (x + phi_ext).cos(),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Potential::Pendulum { amplitude, wavenumber } => {
                let k = wavenumber as f64;
                -amplitude * k * (k * x).sin()
            }
            Potential::ZeroPi { el, ej, phi_ext } => 2.0 * el * x + ej * (x + phi_ext).sin(),
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match *self {
            Potential::Pendulum { amplitude, wavenumber } => {
                let k = wavenumber as f64;
                -amplitude * k * k * (k * x).cos()
            }
            Potential::ZeroPi { el, ej, phi_ext } => 2.0 * el + ej * (x + phi_ext).cos(),
        }
    }

    /// Period for periodic potentials.
    pub fn period(&self) -> Option<f64> {
        match *self {
            Potential::Pendulum { wavenumber, .. } if wavenumber != 0 => {
                Some(2.0 * PI / (wavenumber.unsigned_abs() as f64))
            }
            _ => None,
        }
    }

    /// True when `V → ∞` as `|φ| → ∞`.
    pub fn is_confining(&self) -> bool {
        matches!(*self, Potential::ZeroPi { el, .. } if el > 0.0)
    }

    /// Largest absolute energy scale of the potential.
    pub fn scale(&self) -> f64 {
        match *self {
            Potential::Pendulum { amplitude, .. } => amplitude.abs(),
            Potential::ZeroPi { el, ej, .. } => el.abs().max(ej.abs()),
        }
    }
}

/// `H_res(P, φ) = α P² + V(φ) + Λ(J)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonantModel {
    pub alpha: f64,
    pub potential: Potential,
    pub lambda_j: f64,
    pub r_res: f64,
    pub j: f64,
}

/// Phase-space search window for 0–π models.
pub const ZERO_PI_WINDOW: (f64, f64) = (-4.0 * PI, 4.0 * PI);

impl ResonantModel {
    pub fn pendulum(alpha: f64, amplitude: f64, wavenumber: i32, lambda_j: f64) -> Result<Self> {
        let m = Self {
            alpha,
            potential: Potential::Pendulum { amplitude, wavenumber },
            lambda_j,
            r_res: 0.0,
            j: 0.0,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(invalid(format!("alpha must be positive, got {}", self.alpha)));
        }
        if let Potential::Pendulum { wavenumber: 0, .. } = self.potential {
            return Err(invalid("pendulum wavenumber must be nonzero"));
        }
        Ok(())
    }

    pub fn energy(&self, p: f64, phi: f64) -> f64 {
        self.alpha * p * p + self.potential.value(phi) + self.lambda_j
    }

    /// `V(φ) + Λ`, the energy at rest.
    pub fn rest_energy(&self, phi: f64) -> f64 {
        self.potential.value(phi) + self.lambda_j
    }

    /// Window holding one copy of every fixed point: one period `[0, 2π/k)`
    /// for pendulums, `[−4π, 4π]` for 0–π.
    pub fn default_window(&self) -> (f64, f64) {
        match self.potential.period() {
            Some(p) => (0.0, p),
            None => ZERO_PI_WINDOW,
        }
    }
}

/// Resonance ratio of the two mode actions and the resonant action
/// `R_res(J) = slope·J + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceLocus {
    /// `N₁/N₂` (coupled transmons) or `n_θ/n_φ` (0–π).
    pub ratio: f64,
    pub r_res_slope: f64,
    pub r_res_offset: f64,
}

fn two_mode_charging(spec: &CircuitSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    match spec.family {
        CircuitFamily::SingleTransmon => Err(invalid("resonances need a two-mode circuit")),
        _ => {
            let (e1, e2) = (spec.ec[0], spec.ec[1]);
            if !(e1 > 0.0 && e2 > 0.0) {
                return Err(invalid("both charging energies must be positive"));
            }
            Ok((e1, e2))
        }
    }
}

/// Frequencies `ω_i = 8 E_Ci N_i` satisfy `m ω₁ = n ω₂` when
/// `N₁/N₂ = n E_C2 / (m E_C1)`.
pub fn resonance_locus(spec: &CircuitSpec, sel: &ResonanceSelector) -> Result<ResonanceLocus> {
    let (e1, e2) = two_mode_charging(spec)?;
    let (m, n) = (sel.m as f64, sel.n as f64);
    let (l1, l2) = (sel.l1 as f64, sel.l2 as f64);
    let denom = m * m * e1 + n * n * e2;
    let offset = match spec.family {
        CircuitFamily::ZeroPi => m * e1 * spec.ng_of(0) / denom,
        _ => 0.0,
    };
    Ok(ResonanceLocus {
        ratio: n * e2 / (m * e1),
        r_res_slope: (m * l1 * e1 + n * l2 * e2) / denom,
        r_res_offset: offset,
    })
}

/// Closed-form resonant Hamiltonian obtained by averaging over the fast
/// angle `ψ` in the variables `φ₁ = l2 Φ + n ψ`, `φ₂ = l1 Φ + m ψ`,
/// `N₁ = m R − l1 J`, `N₂ = −n R + l2 J`, with `R = R_res + P`.
///
/// Coupled transmons need `m = n` (the only case with a non-vanishing
/// average coupling) and zero offset charges. 0–π supports the default
/// selector only.
pub fn reduce_to_resonance(spec: &CircuitSpec, sel: &ResonanceSelector, j: f64) -> Result<ResonantModel> {
    let (e1, e2) = two_mode_charging(spec)?;
    if !j.is_finite() {
        return Err(invalid("J must be finite"));
    }
    let locus = resonance_locus(spec, sel)?;
    let r_res = locus.r_res_slope * j + locus.r_res_offset;
    let (m, n) = (sel.m as f64, sel.n as f64);
    let alpha = 4.0 * (m * m * e1 + n * n * e2);
    let model = match spec.family {
        CircuitFamily::CoupledTransmons => {
            if sel.m != sel.n {
                return Err(Error::UnsupportedResonance {
                    m: sel.m,
                    n: sel.n,
                    reason: "closed form exists only for m = n".into(),
                });
            }
            if spec.ng.iter().any(|&g| g != 0.0) {
                return Err(invalid("coupled-transmon reduction assumes zero offset charges"));
            }
            let d = (sel.l2 as i64 * sel.m as i64 - sel.l1 as i64 * sel.n as i64) as f64;
            ResonantModel {
                alpha,
                potential: Potential::Pendulum {
                    amplitude: spec.beta * m / 2.0,
                    wavenumber: sel.l2 - sel.l1,
                },
                lambda_j: 4.0 * e1 * e2 * d * d * j * j / (m * m * e1 + n * n * e2),
                r_res,
                j,
            }
        }
        CircuitFamily::ZeroPi => {
            if *sel != ResonanceSelector::default() {
                return Err(Error::UnsupportedResonance {
                    m: sel.m,
                    n: sel.n,
                    reason: "0–π closed form is available for (m, n, l1, l2) = (1, 1, 1, 2) only".into(),
                });
            }
            let ng = spec.ng_of(0);
            ResonantModel {
                alpha,
                potential: Potential::ZeroPi {
                    el: spec.el,
                    ej: spec.ej[0],
                    phi_ext: spec.phi_ext,
                },
                lambda_j: 4.0 * e1 * e2 * (ng - j).powi(2) / (e1 + e2),
                r_res,
                j,
            }
        }
        CircuitFamily::SingleTransmon => unreachable!("rejected above"),
    };
    model.validate()?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coupled(beta: f64) -> CircuitSpec {
        CircuitSpec::coupled_transmons([0.002, 0.003], [1.0, 1.0], beta)
    }

    fn zero_pi(ext: f64) -> CircuitSpec {
        CircuitSpec::zero_pi(0.092, 1.14, 6.0, 0.38, 0.0, ext)
    }

    #[test]
    fn selector_validation() {
        assert!(ResonanceSelector::new(1, 1, 1, 2).is_ok());
        assert!(ResonanceSelector::new(2, 3, 1, 2).is_ok());
        assert!(ResonanceSelector::new(1, 1, 1, 1).is_err());
        assert!(ResonanceSelector::new(2, 2, 0, 1).is_err());
        assert!(ResonanceSelector::new(0, 1, 0, 1).is_err());
    }

    #[test]
    fn loci() {
        let sel = ResonanceSelector::default();
        assert_eq!(resonance_locus(&coupled(1.0), &sel).unwrap().ratio, 1.5);
        let z = resonance_locus(&zero_pi(0.0), &sel).unwrap().ratio;
        assert!((z - 12.391).abs() < 1e-3, "{z}");
        let sym = CircuitSpec::coupled_transmons([0.004, 0.004], [1.0, 1.0], 1.0);
        assert_eq!(resonance_locus(&sym, &sel).unwrap().ratio, 1.0);
        let single = CircuitSpec::single_transmon(0.002, 1.0, 0.0);
        assert!(resonance_locus(&single, &sel).is_err());
    }

    #[test]
    fn coupled_reduction_coefficients() {
        let m = reduce_to_resonance(&coupled(1.0), &ResonanceSelector::default(), 3.0).unwrap();
        assert!((m.alpha - 0.02).abs() < 1e-15);
        assert_eq!(m.potential, Potential::Pendulum { amplitude: 0.5, wavenumber: 1 });
        let err = reduce_to_resonance(&coupled(1.0), &ResonanceSelector::new(2, 3, 1, 2).unwrap(), 1.0);
        assert!(matches!(err, Err(Error::UnsupportedResonance { m: 2, n: 3, .. })));
    }

    #[test]
    fn zero_pi_reduction_coefficients() {
        let m = reduce_to_resonance(&zero_pi(0.0), &ResonanceSelector::default(), 0.0).unwrap();
        assert!((m.alpha - 4.928).abs() < 1e-12);
        assert_eq!(m.lambda_j, 0.0);
        let v0 = m.potential.value(0.0);
        assert!((v0 - (0.38 * PI * PI / 3.0 - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_symmetric_in_momentum_and_hits_extrema() {
        let m = ResonantModel::pendulum(0.02, 0.5, 1, 0.1).unwrap();
        assert_eq!(m.energy(0.3, 1.0), m.energy(-0.3, 1.0));
        assert!((m.energy(0.0, PI) - (0.1 - 0.5)).abs() < 1e-15);
        assert!((m.energy(0.0, 0.0) - (0.1 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for pot in [
            Potential::Pendulum { amplitude: 0.7, wavenumber: 2 },
            Potential::ZeroPi { el: 0.38, ej: 6.0, phi_ext: PI },
        ] {
            for x in [-2.0, 0.3, 1.7] {
                let h = 1e-5;
                let d1 = (pot.value(x + h) - pot.value(x - h)) / (2.0 * h);
                let d2 = (pot.derivative(x + h) - pot.derivative(x - h)) / (2.0 * h);
                assert!((d1 - pot.derivative(x)).abs() < 1e-7);
                assert!((d2 - pot.second_derivative(x)).abs() < 1e-7);
            }
        }
    }
}
