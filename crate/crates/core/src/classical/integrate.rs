//! Störmer–Verlet integration of separable Hamiltonians.

use crate::circuit::{CircuitFamily, CircuitSpec};
use crate::error::{invalid, Error, Result};

use super::model::ResonantModel;

/// `H(q, p) = T(p) + U(q)` with analytic gradients.
pub trait SeparableHamiltonian {
    fn degrees_of_freedom(&self) -> usize;
    /// `∂T/∂p` into `out`.
    fn velocity(&self, p: &[f64], out: &mut [f64]);
    /// `−∂U/∂q` into `out`.
    fn force(&self, q: &[f64], out: &mut [f64]);
    fn energy(&self, q: &[f64], p: &[f64]) -> f64;
}

impl SeparableHamiltonian for ResonantModel {
    fn degrees_of_freedom(&self) -> usize {
        1
    }

    fn velocity(&self, p: &[f64], out: &mut [f64]) {
        out[0] = 2.0 * self.alpha * p[0];
    }

    fn force(&self, q: &[f64], out: &mut [f64]) {
        out[0] = -self.potential.derivative(q[0]);
    }

    fn energy(&self, q: &[f64], p: &[f64]) -> f64 {
        ResonantModel::energy(self, p[0], q[0])
    }
}

/// Classical two-mode circuit with conjugate pairs `(φᵢ, Nᵢ)`:
/// coupled transmons `(φ₁, φ₂; N₁, N₂)` or 0–π `(θ, φ; n_θ, n_φ)`.
#[derive(Debug, Clone)]
pub struct TwoModeClassical {
    spec: CircuitSpec,
}

impl TwoModeClassical {
    pub fn new(spec: CircuitSpec) -> Result<Self> {
        spec.validate()?;
        if spec.family == CircuitFamily::SingleTransmon {
            return Err(invalid("two-mode dynamics needs a two-mode circuit"));
        }
        Ok(Self { spec })
    }
}

impl SeparableHamiltonian for TwoModeClassical {
    fn degrees_of_freedom(&self) -> usize {
        2
    }

    fn velocity(&self, p: &[f64], out: &mut [f64]) {
        let s = &self.spec;
        out[0] = 8.0 * s.ec[0] * (p[0] - s.ng_of(0));
        out[1] = 8.0 * s.ec[1] * (p[1] - if s.family == CircuitFamily::CoupledTransmons { s.ng_of(1) } else { 0.0 });
    }

    fn force(&self, q: &[f64], out: &mut [f64]) {
        let s = &self.spec;
        let (a, b) = (q[0], q[1]);
        match s.family {
            CircuitFamily::CoupledTransmons => {
                out[0] = -(s.ej[0] * a.sin() + s.beta * a.cos() * b.sin());
                out[1] = -(s.ej[1] * b.sin() + s.beta * a.sin() * b.cos());
            }
            CircuitFamily::ZeroPi => {
                let ej = s.ej[0];
                let c = b - s.phi_ext;
                out[0] = -2.0 * ej * a.sin() * c.cos();
                out[1] = -2.0 * ej * a.cos() * c.sin() - 2.0 * s.el * b;
            }
            CircuitFamily::SingleTransmon => unreachable!("rejected in new"),
        }
    }

    fn energy(&self, q: &[f64], p: &[f64]) -> f64 {
        let s = &self.spec;
        let (a, b) = (q[0], q[1]);
        match s.family {
            CircuitFamily::CoupledTransmons => {
                let n1 = p[0] - s.ng_of(0);
                let n2 = p[1] - s.ng_of(1);
                4.0 * s.ec[0] * n1 * n1 + 4.0 * s.ec[1] * n2 * n2 - s.ej[0] * a.cos() - s.ej[1] * b.cos()
                    + s.beta * a.sin() * b.sin()
            }
            CircuitFamily::ZeroPi => {
                let nt = p[0] - s.ng_of(0);
                4.0 * s.ec[0] * nt * nt + 4.0 * s.ec[1] * p[1] * p[1]
                    - 2.0 * s.ej[0] * a.cos() * (b - s.phi_ext).cos()
                    + s.el * b * b
            }
            CircuitFamily::SingleTransmon => unreachable!("rejected in new"),
        }
    }
}

/// Sampled trajectory. `q[k]`, `p[k]` are flattened states at `t[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dof: usize,
    pub t: Vec<f64>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub energy: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn q_at(&self, k: usize) -> &[f64] {
        &self.q[k * self.dof..(k + 1) * self.dof]
    }

    pub fn p_at(&self, k: usize) -> &[f64] {
        &self.p[k * self.dof..(k + 1) * self.dof]
    }

    /// `max_k |H(t_k) − H(0)| / |H(0)|`.
    pub fn max_relative_energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        self.energy.iter().map(|e| ((e - e0) / e0).abs()).fold(0.0, f64::max)
    }
}

/// Kick–drift–kick leapfrog for `steps` steps of size `dt`, recording every
/// `sample_every`-th state (the initial and final states always).
pub fn integrate_trajectory<H: SeparableHamiltonian>(
    h: &H,
    q0: &[f64],
    p0: &[f64],
    dt: f64,
    steps: usize,
    sample_every: usize,
) -> Result<Trajectory> {
    let d = h.degrees_of_freedom();
    if q0.len() != d || p0.len() != d {
        return Err(invalid(format!("state must have {d} coordinates and momenta")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("dt must be positive, got {dt}")));
    }
    let every = sample_every.max(1);
    let mut q = q0.to_vec();
    let mut p = p0.to_vec();
    let mut f = vec![0.0; d];
    let mut v = vec![0.0; d];
    let mut out = Trajectory {
        dof: d,
        t: vec![0.0],
        q: q.clone(),
        p: p.clone(),
        energy: vec![h.energy(&q, &p)],
    };
    h.force(&q, &mut f);
    for step in 1..=steps {
        for i in 0..d {
            p[i] += 0.5 * dt * f[i];
        }
        h.velocity(&p, &mut v);
        for i in 0..d {
            q[i] += dt * v[i];
        }
        h.force(&q, &mut f);
        for i in 0..d {
            p[i] += 0.5 * dt * f[i];
        }
        if q.iter().chain(&p).any(|x| !x.is_finite()) {
            return Err(Error::NumericFailure {
                iterations: step,
                context: format!("non-finite state at step {step}"),
            });
        }
        if step % every == 0 || step == steps {
            out.t.push(step as f64 * dt);
            out.q.extend_from_slice(&q);
            out.p.extend_from_slice(&p);
            out.energy.push(h.energy(&q, &p));
        }
    }
    Ok(out)
}

/// Tangent map of `steps` leapfrog steps of the reduced model started at
/// `(phi0, p0)`; row-major 2×2 acting on `(δφ, δP)`.
pub fn monodromy(model: &ResonantModel, phi0: f64, p0: f64, dt: f64, steps: usize) -> Result<[[f64; 2]; 2]> {
    if !(dt > 0.0) {
        return Err(invalid("dt must be positive"));
    }
    let mut phi = phi0;
    let mut p = p0;
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    let kick = |m: &mut [[f64; 2]; 2], curv: f64, h: f64| {
        for c in 0..2 {
            m[1][c] -= h * curv * m[0][c];
        }
    };
    let alpha = model.alpha;
    for _ in 0..steps {
        kick(&mut m, model.potential.second_derivative(phi), 0.5 * dt);
        p -= 0.5 * dt * model.potential.derivative(phi);
        for c in 0..2 {
            m[0][c] += 2.0 * alpha * dt * m[1][c];
        }
        phi += 2.0 * alpha * dt * p;
        kick(&mut m, model.potential.second_derivative(phi), 0.5 * dt);
        p -= 0.5 * dt * model.potential.derivative(phi);
    }
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NumericFailure {
            iterations: steps,
            context: "non-finite monodromy".into(),
        });
    }
    Ok(m)
}

/// Small-oscillation period about a minimum of curvature `v2`:
/// `2π / √(2 α V'')`.
pub fn small_oscillation_period(model: &ResonantModel, v2: f64) -> Result<f64> {
    if !(v2 > 0.0) {
        return Err(invalid("small oscillations need positive curvature"));
    }
    Ok(2.0 * std::f64::consts::PI / (2.0 * model.alpha * v2).sqrt())
}

/// Mean period from upward crossings of `q = center` along a 1-DOF
/// trajectory, linearly interpolated.
pub fn measured_period(traj: &Trajectory, center: f64) -> Option<f64> {
    let mut crossings = Vec::new();
    for k in 1..traj.len() {
        let a = traj.q_at(k - 1)[0] - center;
        let b = traj.q_at(k)[0] - center;
        if a < 0.0 && b >= 0.0 {
            let frac = a / (a - b);
            crossings.push(traj.t[k - 1] + frac * (traj.t[k] - traj.t[k - 1]));
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    Some((crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pendulum() -> ResonantModel {
        ResonantModel::pendulum(0.02, 0.5, 1, 0.0).unwrap()
    }

    #[test]
    fn fixed_point_stays_put() {
        let m = pendulum();
        let tr = integrate_trajectory(&m, &[PI], &[0.0], 0.5, 100_000, 100_000).unwrap();
        let last = tr.len() - 1;
        assert!((tr.q_at(last)[0] - PI).abs() < 1e-12 && tr.p_at(last)[0].abs() < 1e-12);
    }

    #[test]
    fn small_oscillation_period_matches_harmonic_estimate() {
        let m = pendulum();
        let t_small = small_oscillation_period(&m, m.potential.second_derivative(PI)).unwrap();
        let tr = integrate_trajectory(&m, &[PI + 0.01], &[0.0], t_small / 200.0, 4000, 1).unwrap();
        let t = measured_period(&tr, PI).unwrap();
        assert!(((t - t_small) / t_small).abs() < 0.01);
    }

    #[test]
    fn monodromy_is_area_preserving() {
        let m = pendulum();
        let t_small = small_oscillation_period(&m, 0.5).unwrap();
        let mm = monodromy(&m, PI + 0.1, 0.0, t_small / 200.0, 200).unwrap();
        let det = mm[0][0] * mm[1][1] - mm[0][1] * mm[1][0];
        assert!((det - 1.0).abs() < 1e-8);
    }

    #[test]
    fn two_mode_forces_are_gradients() {
        for spec in [
            CircuitSpec::coupled_transmons([0.002, 0.003], [1.0, 1.0], 1.0),
            CircuitSpec::zero_pi(0.092, 1.14, 6.0, 0.38, 0.0, 0.4),
        ] {
            let h = TwoModeClassical::new(spec).unwrap();
            let (q, p) = ([0.3, -1.1], [2.0, -3.0]);
            let mut f = [0.0; 2];
            let mut v = [0.0; 2];
            h.force(&q, &mut f);
            h.velocity(&p, &mut v);
            let eps = 1e-6;
            for i in 0..2 {
                let mut qp = q;
                let mut qm = q;
                qp[i] += eps;
                qm[i] -= eps;
                let du = (h.energy(&qp, &p) - h.energy(&qm, &p)) / (2.0 * eps);
                assert!((du + f[i]).abs() < 1e-6);
                let mut pp = p;
                let mut pm = p;
                pp[i] += eps;
                pm[i] -= eps;
                let dt = (h.energy(&q, &pp) - h.energy(&q, &pm)) / (2.0 * eps);
                assert!((dt - v[i]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn non_finite_state_reports_step() {
        let m = pendulum();
        let err = integrate_trajectory(&m, &[f64::NAN], &[0.0], 0.1, 10, 1).unwrap_err();
        assert!(matches!(err, Error::NumericFailure { iterations: 1, .. }));
    }
}
