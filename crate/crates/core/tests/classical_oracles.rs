use std::f64::consts::PI;

use qprot_core::classical::{
    find_fixed_points, integrate_trajectory, monodromy, phase_portrait, reduce_to_resonance, resonance_locus,
    separatrix_energy, small_oscillation_period, FixedPointKind, PortraitGrid, ResonanceSelector, ResonantModel,
};
use qprot_core::quadrature::integrate_gauss_legendre;
use qprot_core::CircuitSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn coupled() -> CircuitSpec {
    CircuitSpec::coupled_transmons([0.002, 0.003], [1.0, 1.0], 1.0)
}

fn zero_pi(ext: f64) -> CircuitSpec {
    CircuitSpec::zero_pi(0.092, 1.14, 6.0, 0.38, 0.0, ext)
}

/// Mean over the fast angle by 64-point Gauss–Legendre on `[−π, π]`; the
/// integrand mixes low trigonometric orders with a ψ² term.
fn average_over_psi(f: impl Fn(f64) -> f64) -> f64 {
    integrate_gauss_legendre(f, -PI, PI, 64) / (2.0 * PI)
}

/// Full two-mode Hamiltonian in the resonant variables `(R, J, Φ, ψ)`.
fn transformed(spec: &CircuitSpec, sel: (f64, f64, f64, f64), r: f64, j: f64, big_phi: f64, psi: f64) -> f64 {
    let (m, n, l1, l2) = sel;
    let q1 = l2 * big_phi + n * psi;
    let q2 = l1 * big_phi + m * psi;
    let n1 = m * r - l1 * j;
    let n2 = -n * r + l2 * j;
    match spec.family {
        qprot_core::CircuitFamily::CoupledTransmons => {
            4.0 * spec.ec[0] * n1 * n1 + 4.0 * spec.ec[1] * n2 * n2 - spec.ej[0] * q1.cos() - spec.ej[1] * q2.cos()
                + spec.beta * q1.sin() * q2.sin()
        }
        _ => {
            let nt = n1 - spec.ng[0];
            4.0 * spec.ec[0] * nt * nt + 4.0 * spec.ec[1] * n2 * n2
                - 2.0 * spec.ej[0] * q1.cos() * (q2 - spec.phi_ext).cos()
                + spec.el * q2 * q2
        }
    }
}

fn check_averaging(spec: &CircuitSpec, seed: u64) {
    let sel = ResonanceSelector::default();
    let s = (sel.m() as f64, sel.n() as f64, sel.l1() as f64, sel.l2() as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let p: f64 = rng.random_range(-20.0..20.0);
        let big_phi: f64 = rng.random_range(-PI..PI);
        let j: f64 = rng.random_range(-50.0..50.0);
        let model = reduce_to_resonance(spec, &sel, j).unwrap();
        let r = model.r_res + p;
        let avg = average_over_psi(|psi| transformed(spec, s, r, j, big_phi, psi));
        let closed = model.energy(p, big_phi);
        let rel = (avg - closed).abs() / closed.abs().max(1.0);
        assert!(rel < 1e-8, "P {p} Φ {big_phi} J {j}: {avg} vs {closed}");
    }
}

#[test]
fn reduction_matches_fast_angle_average() {
    check_averaging(&coupled(), 1);
    check_averaging(&zero_pi(0.0), 2);
    check_averaging(&zero_pi(PI), 3);
    check_averaging(&zero_pi(0.7), 4);
}

#[test]
fn resonance_loci() {
    let sel = ResonanceSelector::default();
    assert!((resonance_locus(&coupled(), &sel).unwrap().ratio - 1.5).abs() < 1e-12);
    assert!((resonance_locus(&zero_pi(0.0), &sel).unwrap().ratio - 12.391).abs() < 1e-3);
}

#[test]
fn reduced_coefficients() {
    let m = reduce_to_resonance(&zero_pi(0.0), &ResonanceSelector::default(), 0.0).unwrap();
    assert!((m.alpha - 4.928).abs() < 1e-12);
    assert_eq!(m.lambda_j, 0.0);
    let c = reduce_to_resonance(&coupled(), &ResonanceSelector::default(), 0.0).unwrap();
    assert!((c.alpha - 0.02).abs() < 1e-15);
    assert_eq!(separatrix_energy(&c).unwrap(), 0.5);
}

#[test]
fn leapfrog_energy_drift_and_monodromy() {
    let m = ResonantModel::pendulum(0.02, 0.5, 1, 0.0).unwrap();
    let period = small_oscillation_period(&m, 0.5).unwrap();
    let dt = period / 200.0;
    // Small oscillation about the elliptic point at π.
    let traj = integrate_trajectory(&m, &[PI - 0.05], &[0.0], dt, 100_000, 100).unwrap();
    assert!(traj.max_relative_energy_drift() < 1e-6, "{}", traj.max_relative_energy_drift());

    let mono = monodromy(&m, PI - 1.0, 0.0, dt, 20_000).unwrap();
    let det = mono[0][0] * mono[1][1] - mono[0][1] * mono[1][0];
    assert!((det - 1.0).abs() < 1e-8, "{det}");
}

#[test]
fn zero_pi_half_flux_minima_match_brute_force() {
    let m = reduce_to_resonance(&zero_pi(PI), &ResonanceSelector::default(), 0.0).unwrap();
    let (lo, hi) = m.default_window();
    let found: Vec<f64> = find_fixed_points(&m, (lo, hi))
        .unwrap()
        .into_iter()
        .filter(|f| f.kind == FixedPointKind::Elliptic)
        .map(|f| f.phi)
        .collect();
    let h = 1e-5;
    let n = ((hi - lo) / h) as usize;
    let v = |i: usize| m.rest_energy(lo + i as f64 * h);
    let brute: Vec<f64> = (1..n).filter(|&i| v(i) < v(i - 1) && v(i) <= v(i + 1)).map(|i| lo + i as f64 * h).collect();
    assert_eq!(found.len(), brute.len());
    for (a, b) in found.iter().zip(&brute) {
        assert!((a - b).abs() < 2e-5);
    }
}

#[test]
fn portrait_contours_on_level_sets() {
    let m = reduce_to_resonance(&coupled(), &ResonanceSelector::default(), 0.0).unwrap();
    let e_sx = separatrix_energy(&m).unwrap();
    let pp = phase_portrait(&m, PortraitGrid::default_for(&m), &[-0.25, e_sx, 1.0]).unwrap();
    let (lo, hi) = pp.value_range();
    for c in &pp.contours {
        for &(x, y) in c.polylines.iter().flatten() {
            assert!((m.energy(y, x) - c.energy).abs() < 1e-6 * (hi - lo));
        }
    }
    let sx = &pp.contours[1].polylines;
    assert!(sx.iter().any(|l| l.first() != l.last()));
    let inner = &pp.contours[0].polylines;
    assert!(inner.iter().any(|l| l.first() == l.last()));
}
