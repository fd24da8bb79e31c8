use qprot_core::circuit::{build_cos_op, build_hamiltonian, OperatorBasis};
use qprot_core::spectrum::{certify_convergence, eigendecompose, unfold_levels};
use qprot_core::{BasisSpec, CircuitSpec, HermitianOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn levels(spec: &CircuitSpec, basis: &BasisSpec) -> Vec<f64> {
    let h = build_hamiltonian(spec, basis).unwrap();
    eigendecompose(&h, false).unwrap().levels().to_vec()
}

/// Asymptotic transmon levels including the quartic correction of `cos φ`.
fn transmon_asymptotic(ec: f64, ej: f64, m: usize) -> f64 {
    let m = m as f64;
    -ej + (8.0 * ec * ej).sqrt() * (m + 0.5) - ec * (6.0 * m * m + 6.0 * m + 3.0) / 12.0
}

#[test]
fn free_rotor_levels() {
    let spec = CircuitSpec::single_transmon(1.0, 0.0, 0.0);
    let e = levels(&spec, &BasisSpec::charge(2));
    for (a, b) in e.iter().zip([0.0, 4.0, 4.0, 16.0, 16.0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn transmon_matches_asymptotic_oracle() {
    let spec = CircuitSpec::single_transmon(0.002, 1.0, 0.0);
    let e = levels(&spec, &BasisSpec::charge(25));
    for m in 0..5 {
        let gap = e[m] - e[0];
        let want = transmon_asymptotic(0.002, 1.0, m) - transmon_asymptotic(0.002, 1.0, 0);
        if m > 0 {
            assert!(((gap - want) / want).abs() < 0.02, "gap {m}: {gap} vs {want}");
        }
        let abs = transmon_asymptotic(0.002, 1.0, m);
        assert!(((e[m] - abs) / abs).abs() < 0.02);
    }
    assert!(((e[1] - e[0]) - 0.1245).abs() < 0.02 * 0.1245);

    let doubled = levels(&spec, &BasisSpec::charge(50));
    for m in 0..5 {
        assert!((e[m] - doubled[m]).abs() < 1e-9);
    }
}

#[test]
fn transmon_cutoff_plus_ten_is_stable() {
    let spec = CircuitSpec::single_transmon(0.002, 1.0, 0.0);
    let a = levels(&spec, &BasisSpec::charge(25));
    let b = levels(&spec, &BasisSpec::charge(35));
    for k in 0..20 {
        assert!((a[k] - b[k]).abs() < 1e-9);
    }
}

#[test]
fn uncoupled_pair_is_minkowski_sum() {
    let n = 8;
    let pair = CircuitSpec::coupled_transmons([0.002, 0.003], [1.0, 1.0], 0.0);
    let got = levels(&pair, &BasisSpec::charge(n));
    let a = levels(&CircuitSpec::single_transmon(0.002, 1.0, 0.0), &BasisSpec::charge(n));
    let b = levels(&CircuitSpec::single_transmon(0.003, 1.0, 0.0), &BasisSpec::charge(n));
    let mut sums: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
    sums.sort_by(f64::total_cmp);
    assert_eq!(got.len(), sums.len());
    let dev = got.iter().zip(&sums).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(dev < 1e-10, "{dev}");
}

#[test]
fn coupling_sign_does_not_change_spectrum() {
    let basis = BasisSpec::charge(8);
    let up = levels(&CircuitSpec::coupled_transmons([0.002, 0.003], [1.0, 1.0], 0.7), &basis);
    let down = levels(&CircuitSpec::coupled_transmons([0.002, 0.003], [1.0, 1.0], -0.7), &basis);
    for (a, b) in up.iter().zip(&down) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn zero_pi_flux_is_two_pi_periodic() {
    let basis = BasisSpec::charge_and_grid(6, 6.0 * std::f64::consts::PI, 61);
    let a = levels(&CircuitSpec::zero_pi(0.092, 1.14, 6.0, 0.38, 0.0, 0.0), &basis);
    let b = levels(&CircuitSpec::zero_pi(0.092, 1.14, 6.0, 0.38, 0.0, 2.0 * std::f64::consts::PI), &basis);
    for k in 0..20 {
        assert!((a[k] - b[k]).abs() < 1e-9);
    }
}

#[test]
fn cos_operator_spectrum_in_unit_interval() {
    let e = eigendecompose(&build_cos_op(12).unwrap(), false).unwrap();
    assert!(e.levels().iter().all(|x| x.abs() <= 1.0 + 1e-12));
}

#[test]
fn certificates() {
    let rotor = CircuitSpec::single_transmon(1.0, 0.0, 0.0);
    assert_eq!(certify_convergence(&rotor, &BasisSpec::charge(10), 5, 1e-9).unwrap(), 5);

    let transmon = CircuitSpec::single_transmon(0.002, 1.0, 0.0);
    assert_eq!(certify_convergence(&transmon, &BasisSpec::charge(25), 20, 1e-6).unwrap(), 20);
}

#[test]
fn small_eigen_examples() {
    let d = HermitianOperator::from_dense(3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0], OperatorBasis::Unspecified)
        .unwrap();
    assert_eq!(eigendecompose(&d, false).unwrap().levels(), &[1.0, 2.0, 3.0]);
    let x = HermitianOperator::from_dense(2, &[0.0, 1.0, 1.0, 0.0], OperatorBasis::Unspecified).unwrap();
    let e = eigendecompose(&x, false).unwrap();
    assert!((e.levels()[0] + 1.0).abs() < 1e-15 && (e.levels()[1] - 1.0).abs() < 1e-15);
    let one = HermitianOperator::from_dense(1, &[2.5], OperatorBasis::Unspecified).unwrap();
    assert_eq!(eigendecompose(&one, true).unwrap().levels(), &[2.5]);
}

#[test]
fn random_symmetric_reconstruction() {
    let n = 50;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = rng.random_range(-1.0..1.0);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
    let op = HermitianOperator::from_dense(n, &a, OperatorBasis::Unspecified).unwrap();
    let s = eigendecompose(&op, true).unwrap();
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut recon = vec![0.0; n * n];
    for k in 0..n {
        let v = s.vector(k).unwrap();
        let lam = s.levels()[k];
        for i in 0..n {
            let hv: f64 = (0..n).map(|j| a[i * n + j] * v[j]).sum();
            assert!((hv - lam * v[i]).abs() <= 1e-8 * norm);
            for j in 0..n {
                recon[i * n + j] += lam * v[i] * v[j];
            }
        }
    }
    let dev = recon.iter().zip(&a).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(dev < 1e-9, "{dev}");
}

#[test]
fn quadratic_staircase_unfolds_to_unit_spacing() {
    // N(E) = E² has levels at E_i = √i.
    let e: Vec<f64> = (1..=2000).map(|i| (i as f64).sqrt()).collect();
    let u = unfold_levels(&e, 6, 0.1).unwrap();
    assert!((u.mean_spacing() - 1.0).abs() < 0.02);
}

#[test]
fn equally_spaced_levels_any_step() {
    for h in [1e-3, 0.37, 250.0] {
        let e: Vec<f64> = (0..300).map(|i| i as f64 * h).collect();
        let u = unfold_levels(&e, 4, 0.1).unwrap();
        for w in u.unfolded.windows(2) {
            assert!((w[1] - w[0] - 1.0).abs() < 1e-6);
        }
    }
}
