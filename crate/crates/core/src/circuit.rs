//! Truncated-basis matrices for transmon, coupled-transmon and 0–π circuits.
//!
//! Periodic modes use the charge basis `|n>`, `n = -n_max..=n_max`, in which
//! `cos φ = (Σ|n><n+1| + h.c.)/2`. The physical `sin φ` is imaginary there;
//! it is carried as the real antisymmetric generator `S` with
//! `sin φ = -i S`, so `sin φ₁ sin φ₂ = -S₁ ⊗ S₂` stays real symmetric.
//! The extended 0–π φ-mode lives on a uniform grid with Dirichlet ends and
//! central second differences for `n_φ² = -d²/dφ²`.
//!
//! All energies are in GHz.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::SymBand;

/// Circuit family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitFamily {
    SingleTransmon,
    CoupledTransmons,
    ZeroPi,
}

impl CircuitFamily {
    /// Number of charging energies the family carries.
    pub fn mode_count(self) -> usize {
        match self {
            CircuitFamily::SingleTransmon => 1,
            CircuitFamily::CoupledTransmons | CircuitFamily::ZeroPi => 2,
        }
    }

    fn josephson_count(self) -> usize {
        match self {
            CircuitFamily::CoupledTransmons => 2,
            _ => 1,
        }
    }

    /// Number of compact (charge-basis) modes.
    pub fn periodic_mode_count(self) -> usize {
        match self {
            CircuitFamily::CoupledTransmons => 2,
            _ => 1,
        }
    }
}

/// Circuit parameters.
///
/// * `ec`: `[E_C]`, `[E_C1, E_C2]`, or `[E_Cθ, E_Cφ]`.
/// * `ej`: `[E_J]` or `[E_J1, E_J2]`; 0–π has a single `E_J`.
/// * `el`: inductive energy, 0–π only.
/// * `beta`: `β₁₂ = M₁₂ I_C1 I_C2`, coupled transmons only.
/// * `ng`: offset charge per periodic mode.
/// * `phi_ext`: flux phase `π Φ_ext / Φ₀` in radians, 0–π only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub family: CircuitFamily,
    pub ec: Vec<f64>,
    pub ej: Vec<f64>,
    #[serde(default)]
    pub el: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub ng: Vec<f64>,
    #[serde(default)]
    pub phi_ext: f64,
}

impl CircuitSpec {
    pub fn single_transmon(ec: f64, ej: f64, ng: f64) -> Self {
        Self {
            family: CircuitFamily::SingleTransmon,
            ec: vec![ec],
            ej: vec![ej],
            el: 0.0,
            beta: 0.0,
            ng: vec![ng],
            phi_ext: 0.0,
        }
    }

    pub fn coupled_transmons(ec: [f64; 2], ej: [f64; 2], beta: f64) -> Self {
        Self {
            family: CircuitFamily::CoupledTransmons,
            ec: ec.to_vec(),
            ej: ej.to_vec(),
            el: 0.0,
            beta,
            ng: vec![0.0, 0.0],
            phi_ext: 0.0,
        }
    }

    pub fn zero_pi(ec_theta: f64, ec_phi: f64, ej: f64, el: f64, ng: f64, phi_ext: f64) -> Self {
        Self {
            family: CircuitFamily::ZeroPi,
            ec: vec![ec_theta, ec_phi],
            ej: vec![ej],
            el,
            beta: 0.0,
            ng: vec![ng],
            phi_ext,
        }
    }

    /// Offset charge of periodic mode `i`; missing entries read as zero.
    pub fn ng_of(&self, i: usize) -> f64 {
        self.ng.get(i).copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let fam = self.family;
        if self.ec.len() != fam.mode_count() {
            return Err(invalid(format!(
                "{fam:?} needs {} charging energies, got {}",
                fam.mode_count(),
                self.ec.len()
            )));
        }
        if self.ej.len() != fam.josephson_count() {
            return Err(invalid(format!(
                "{fam:?} needs {} Josephson energies, got {}",
                fam.josephson_count(),
                self.ej.len()
            )));
        }
        if self.ng.len() > fam.periodic_mode_count() {
            return Err(invalid(format!(
                "{fam:?} has {} periodic modes but {} offset charges",
                fam.periodic_mode_count(),
                self.ng.len()
            )));
        }
        let energies = self.ec.iter().chain(&self.ej).chain([&self.el]);
        for &e in energies {
            if !(e.is_finite() && e >= 0.0) {
                return Err(invalid(format!("energies must be finite and >= 0, got {e}")));
            }
        }
        if !self.beta.is_finite() || !self.phi_ext.is_finite() || self.ng.iter().any(|g| !g.is_finite()) {
            return Err(invalid("beta, phi_ext and ng must be finite"));
        }
        Ok(())
    }

    /// Same circuit with every energy multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut s = self.clone();
        s.ec.iter_mut().for_each(|e| *e *= c);
        s.ej.iter_mut().for_each(|e| *e *= c);
        s.el *= c;
        s.beta *= c;
        s
    }
}

/// Uniform grid on `[-halfwidth, halfwidth]` with an odd number of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub halfwidth: f64,
    pub points: usize,
}

impl PhaseGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.halfwidth.is_finite() && self.halfwidth > 0.0) {
            return Err(invalid(format!("grid halfwidth must be > 0, got {}", self.halfwidth)));
        }
        if self.points < 3 || self.points.is_multiple_of(2) {
            return Err(invalid(format!("grid points must be odd and >= 3, got {}", self.points)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.halfwidth / (self.points - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points).map(|j| -self.halfwidth + j as f64 * h).collect()
    }
}

/// Truncation of a circuit's Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    /// Charge states `-n_max..=n_max` per periodic mode.
    pub charge_cutoff: usize,
    /// Grid for the extended 0–π φ-mode; must be absent for transmon families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<PhaseGrid>,
}

impl BasisSpec {
    pub fn charge(charge_cutoff: usize) -> Self {
        Self { charge_cutoff, grid: None }
    }

    pub fn charge_and_grid(charge_cutoff: usize, halfwidth: f64, points: usize) -> Self {
        Self {
            charge_cutoff,
            grid: Some(PhaseGrid { halfwidth, points }),
        }
    }

    /// Default truncation per family.
    pub fn default_for(family: CircuitFamily) -> Self {
        match family {
            CircuitFamily::SingleTransmon => Self::charge(25),
            CircuitFamily::CoupledTransmons => Self::charge(35),
            CircuitFamily::ZeroPi => Self::charge_and_grid(15, 6.0 * std::f64::consts::PI, 201),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.charge_cutoff < 1 {
            return Err(invalid("charge cutoff must be >= 1"));
        }
        if let Some(g) = &self.grid {
            g.validate()?;
        }
        Ok(())
    }

    pub fn check_family(&self, family: CircuitFamily) -> Result<()> {
        self.validate()?;
        match (family, self.grid.is_some()) {
            (CircuitFamily::ZeroPi, false) => Err(invalid("0–π basis needs a phase grid for the φ-mode")),
            (CircuitFamily::SingleTransmon | CircuitFamily::CoupledTransmons, true) => {
                Err(invalid(format!("{family:?} is purely periodic; phase grid not allowed")))
            }
            _ => Ok(()),
        }
    }

    /// Every cutoff scaled by `factor`: the charge cutoff is rounded up and
    /// the grid halfwidth grows at fixed spacing.
    pub fn enlarged(&self, factor: f64) -> Self {
        let charge_cutoff = ((self.charge_cutoff as f64) * factor - 1e-9).ceil() as usize;
        let grid = self.grid.map(|g| {
            let half_intervals = ((g.points - 1) / 2) as f64 * factor;
            let half_intervals = half_intervals.round() as usize;
            let h = g.spacing();
            PhaseGrid {
                halfwidth: h * half_intervals as f64,
                points: 2 * half_intervals + 1,
            }
        });
        Self {
            charge_cutoff: charge_cutoff.max(self.charge_cutoff + 1),
            grid,
        }
    }
}

/// Which basis an operator's indices refer to.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorBasis {
    /// Single charge mode, index `n + n_max`.
    Charge { n_max: usize },
    /// Two charge modes, index `i1 * (2 n_max + 1) + i2`.
    ChargeProduct { n_max: usize },
    /// Charge mode (fast index) times phase grid (slow index).
    ChargeTimesGrid { n_max: usize, grid: PhaseGrid },
    /// Position grid of a one-dimensional problem.
    Grid { nodes: Vec<f64> },
    Unspecified,
}

/// Real symmetric matrix with basis metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: SymBand,
    basis: OperatorBasis,
}

/// Symmetry tolerance applied when adopting a dense array.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

impl HermitianOperator {
    pub fn from_band(matrix: SymBand, basis: OperatorBasis) -> Self {
        Self { matrix, basis }
    }

    /// Adopts a row-major dense array, rejecting it if
    /// `|a_ij - a_ji| > 1e-10` anywhere. The stored matrix is the exact
    /// symmetric part.
    pub fn from_dense(dim: usize, entries: &[f64], basis: OperatorBasis) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(invalid(format!("expected {} entries, got {}", dim * dim, entries.len())));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite matrix entry {bad}")));
        }
        let mut m = SymBand::zeros(dim, dim.saturating_sub(1));
        for i in 0..dim {
            for j in 0..=i {
                let a = entries[i * dim + j];
                let b = entries[j * dim + i];
                if (a - b).abs() > SYMMETRY_TOLERANCE {
                    return Err(invalid(format!("matrix not symmetric at ({i}, {j}): {a} vs {b}")));
                }
                m.add(i, j, 0.5 * (a + b));
            }
        }
        let b = m.effective_bandwidth();
        Ok(Self::from_band(m.with_bandwidth(b), basis))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &SymBand {
        &self.matrix
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.basis
    }

    pub fn to_dense(&self) -> Vec<f64> {
        self.matrix.to_dense()
    }
}

/// Real antisymmetric generator `S` of a charge-basis `sin φ = -i S`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricOperator {
    dim: usize,
    /// `S[i+1][i]`; `S[i][i+1]` is its negative.
    lower: Vec<f64>,
}

impl AntisymmetricOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j + 1 {
            self.lower[j]
        } else if j == i + 1 {
            -self.lower[i]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = self.get(i, j);
            }
        }
        a
    }
}

fn check_cutoff(n_max: usize) -> Result<()> {
    if n_max < 1 {
        Err(invalid("charge cutoff n_max must be >= 1"))
    } else {
        Ok(())
    }
}

/// `N - n_g` in the charge basis: `diag(n - ng)`, `n = -n_max..=n_max`.
pub fn build_number_op(n_max: usize, ng: f64) -> Result<HermitianOperator> {
    check_cutoff(n_max)?;
    let dim = 2 * n_max + 1;
    let mut m = SymBand::zeros(dim, 0);
    for i in 0..dim {
        m.add(i, i, i as f64 - n_max as f64 - ng);
    }
    Ok(HermitianOperator::from_band(m, OperatorBasis::Charge { n_max }))
}

/// `cos φ` in the charge basis: 1/2 on the first off-diagonals.
pub fn build_cos_op(n_max: usize) -> Result<HermitianOperator> {
    check_cutoff(n_max)?;
    let dim = 2 * n_max + 1;
    let mut m = SymBand::zeros(dim, 1);
    for i in 0..dim - 1 {
        m.add(i + 1, i, 0.5);
    }
    Ok(HermitianOperator::from_band(m, OperatorBasis::Charge { n_max }))
}

/// Generator `S` with `sin φ = -i S`: `S[n+1][n] = 1/2`, `S[n][n+1] = -1/2`.
pub fn build_sin_op(n_max: usize) -> Result<AntisymmetricOperator> {
    check_cutoff(n_max)?;
    let dim = 2 * n_max + 1;
    Ok(AntisymmetricOperator {
        dim,
        lower: vec![0.5; dim - 1],
    })
}

/// Single-mode transmon block `4 E_C (N - ng)^2 - E_J cos φ`.
fn transmon_block(n_max: usize, ec: f64, ej: f64, ng: f64) -> Result<SymBand> {
    let number = build_number_op(n_max, ng)?;
    let cos = build_cos_op(n_max)?;
    let dim = number.dim();
    let mut m = SymBand::zeros(dim, 1);
    for i in 0..dim {
        let n = number.get(i, i);
        m.add(i, i, 4.0 * ec * n * n);
        if i + 1 < dim {
            m.add(i + 1, i, -ej * cos.get(i + 1, i));
        }
    }
    Ok(m)
}

/// Assembles the circuit Hamiltonian in the given truncation.
pub fn build_hamiltonian(spec: &CircuitSpec, basis: &BasisSpec) -> Result<HermitianOperator> {
    spec.validate()?;
    basis.check_family(spec.family)?;
    let n_max = basis.charge_cutoff;
    match spec.family {
        CircuitFamily::SingleTransmon => {
            let m = transmon_block(n_max, spec.ec[0], spec.ej[0], spec.ng_of(0))?;
            Ok(HermitianOperator::from_band(m, OperatorBasis::Charge { n_max }))
        }
        CircuitFamily::CoupledTransmons => coupled_hamiltonian(spec, n_max),
        CircuitFamily::ZeroPi => zero_pi_hamiltonian(spec, n_max, basis.grid.expect("checked")),
    }
}

fn coupled_hamiltonian(spec: &CircuitSpec, n_max: usize) -> Result<HermitianOperator> {
    let h1 = transmon_block(n_max, spec.ec[0], spec.ej[0], spec.ng_of(0))?;
    let h2 = transmon_block(n_max, spec.ec[1], spec.ej[1], spec.ng_of(1))?;
    let s = build_sin_op(n_max)?;
    let d = 2 * n_max + 1;
    let dim = d * d;
    let mut m = SymBand::zeros(dim, d + 1);
    let idx = |i1: usize, i2: usize| i1 * d + i2;

    for i1 in 0..d {
        for i2 in 0..d {
            let row = idx(i1, i2);
            m.add(row, row, h1.get(i1, i1) + h2.get(i2, i2));
            if i2 + 1 < d {
                m.add(idx(i1, i2 + 1), row, h2.get(i2 + 1, i2));
            }
            if i1 + 1 < d {
                m.add(idx(i1 + 1, i2), row, h1.get(i1 + 1, i1));
                // beta sin φ1 sin φ2 = -beta S1 ⊗ S2; lower triangle only.
                let s1 = s.get(i1 + 1, i1);
                for j2 in [i2.wrapping_sub(1), i2 + 1] {
                    if j2 < d {
                        let v = -spec.beta * s1 * s.get(j2, i2);
                        if v != 0.0 {
                            m.add(idx(i1 + 1, j2), row, v);
                        }
                    }
                }
            }
        }
    }
    Ok(HermitianOperator::from_band(m, OperatorBasis::ChargeProduct { n_max }))
}

fn zero_pi_hamiltonian(spec: &CircuitSpec, n_max: usize, grid: PhaseGrid) -> Result<HermitianOperator> {
    let (ec_theta, ec_phi) = (spec.ec[0], spec.ec[1]);
    let ej = spec.ej[0];
    let number = build_number_op(n_max, spec.ng_of(0))?;
    let cos = build_cos_op(n_max)?;
    let dt = number.dim();
    let nodes = grid.nodes();
    let h = grid.spacing();
    let kinetic = 4.0 * ec_phi / (h * h);
    let dim = dt * nodes.len();
    let mut m = SymBand::zeros(dim, dt);
    let idx = |j: usize, k: usize| j * dt + k;

    for (j, &phi) in nodes.iter().enumerate() {
        // -2 E_J cos θ cos(φ - φ_ext), with cos θ the charge-basis hopping.
        let hop = -2.0 * ej * (phi - spec.phi_ext).cos();
        for k in 0..dt {
            let row = idx(j, k);
            let n = number.get(k, k);
            m.add(row, row, 4.0 * ec_theta * n * n + 2.0 * kinetic + spec.el * phi * phi);
            if k + 1 < dt {
                m.add(idx(j, k + 1), row, hop * cos.get(k + 1, k));
            }
            if j + 1 < nodes.len() {
                m.add(idx(j + 1, k), row, -kinetic);
            }
        }
    }
    Ok(HermitianOperator::from_band(
        m,
        OperatorBasis::ChargeTimesGrid { n_max, grid },
    ))
}
