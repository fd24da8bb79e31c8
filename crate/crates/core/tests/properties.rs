use proptest::prelude::*;

use qprot_core::circuit::{build_hamiltonian, OperatorBasis};
use qprot_core::classical::{reduce_to_resonance, ResonanceSelector, ResonantModel};
use qprot_core::protection::{evaluate, ProtectionMeasurements, ProtectionReport, ProtectionThresholds};
use qprot_core::rmt::{brody_nu, ks_distance, ratios_k1_from_levels, ratios_k2_from_levels, Histogram, ReferenceLaw};
use qprot_core::semiclassics::wkb_tunneling;
use qprot_core::spectrum::{eigendecompose, unfold_levels};
use qprot_core::{BasisSpec, CircuitSpec, HermitianOperator};

fn sorted_levels(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..2.0, min..max).prop_map(|gaps| {
        gaps.iter()
            .scan(0.0, |acc, g| {
                *acc += g;
                Some(*acc)
            })
            .collect()
    })
}

fn symmetric(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |mut a| {
        for i in 0..n {
            for j in 0..i {
                a[j * n + i] = a[i * n + j];
            }
        }
        a
    })
}

proptest! {
    #[test]
    fn unfolding_is_affine_invariant(e in sorted_levels(80, 200), a in 0.1f64..10.0, b in -50.0f64..50.0) {
        let u = unfold_levels(&e, 6, 0.1).unwrap();
        let shifted: Vec<f64> = e.iter().map(|x| a * x + b).collect();
        let v = unfold_levels(&shifted, 6, 0.1).unwrap();
        for (x, y) in u.unfolded.iter().zip(&v.unfolded) {
            prop_assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn ratios_are_affine_invariant(e in sorted_levels(10, 100), a in 0.1f64..10.0, b in -10.0f64..10.0) {
        let shifted: Vec<f64> = e.iter().map(|x| a * x + b).collect();
        for (x, y) in ratios_k1_from_levels(&e).iter().zip(&ratios_k1_from_levels(&shifted)) {
            prop_assert!((x - y).abs() < 1e-12 * x.max(1.0));
        }
        for (x, y) in ratios_k2_from_levels(&e).iter().zip(&ratios_k2_from_levels(&shifted)) {
            prop_assert!((x - y).abs() < 1e-12 * x.max(1.0));
        }
    }

    #[test]
    fn ks_is_permutation_invariant(xs in prop::collection::vec(0.0f64..5.0, 50..300), seed in any::<u64>()) {
        let mut shuffled = xs.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(
            ks_distance(&xs, ReferenceLaw::PoissonSpacing).unwrap(),
            ks_distance(&shuffled, ReferenceLaw::PoissonSpacing).unwrap()
        );
    }

    #[test]
    fn brody_nu_is_consistent(q in 0.0f64..=1.0) {
        let nu = brody_nu(q);
        // Mean spacing ∫ s P_B ds = Γ((q+2)/(q+1)) / ν^{1/(q+1)} = 1.
        let g = nu.powf(1.0 / (q + 1.0));
        prop_assert!((g - statrs::function::gamma::gamma((q + 2.0) / (q + 1.0))).abs() < 1e-10);
    }

    #[test]
    fn histogram_integrates_to_one(xs in prop::collection::vec(0.0f64..4.0, 1..500), bins in 10usize..100) {
        let h = Histogram::new(&xs, bins, 0.0, 4.0).unwrap();
        let total: f64 = (0..h.bins()).map(|k| h.densities[k] * h.width(k)).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn protection_verdicts_recompute(
        q in prop::option::of(0.0f64..1.0),
        ks in prop::option::of(0.0f64..1.0),
        depth in 0.0f64..2.0,
        frac in -0.2f64..0.5,
        t in prop::option::of(0.0f64..0.5),
        compact in any::<bool>(),
    ) {
        let m = ProtectionMeasurements {
            brody_q: q,
            ks_poisson: ks,
            island_depth: depth,
            elliptic_energy: Some(-1.0),
            operating_energy: Some(-1.0 + frac * depth),
            tunneling_at_operating_energy: t,
            compact_phase_space: compact,
        };
        let r = ProtectionReport::new(m.clone(), ProtectionThresholds::default(), vec![]);
        prop_assert!(r.is_consistent());
        prop_assert_eq!(r.recompute(), evaluate(&m, &r.thresholds));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eigenvalues_invariant_under_permutation(a in symmetric(12), seed in any::<u64>()) {
        let n = 12;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let mut b = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] = a[perm[i] * n + perm[j]];
            }
        }
        let ea = eigendecompose(&HermitianOperator::from_dense(n, &a, OperatorBasis::Unspecified).unwrap(), false).unwrap();
        let eb = eigendecompose(&HermitianOperator::from_dense(n, &b, OperatorBasis::Unspecified).unwrap(), false).unwrap();
        for (x, y) in ea.levels().iter().zip(eb.levels()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_is_sum_of_eigenvalues(a in symmetric(20)) {
        let n = 20;
        let e = eigendecompose(&HermitianOperator::from_dense(n, &a, OperatorBasis::Unspecified).unwrap(), false).unwrap();
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        let sum: f64 = e.levels().iter().sum();
        let scale = a.iter().map(|x| x.abs()).sum::<f64>();
        prop_assert!((trace - sum).abs() <= 1e-8 * scale);
    }

    #[test]
    fn coupling_sign_flip_preserves_spectrum(beta in -2.0f64..2.0, e1 in 0.001f64..0.01, e2 in 0.001f64..0.01) {
        let basis = BasisSpec::charge(5);
        let up = CircuitSpec::coupled_transmons([e1, e2], [1.0, 1.0], beta);
        let down = CircuitSpec::coupled_transmons([e1, e2], [1.0, 1.0], -beta);
        let a = eigendecompose(&build_hamiltonian(&up, &basis).unwrap(), false).unwrap();
        let b = eigendecompose(&build_hamiltonian(&down, &basis).unwrap(), false).unwrap();
        for (x, y) in a.levels().iter().zip(b.levels()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn reduction_is_homogeneous_in_energy_scale(
        c in 0.1f64..10.0, j in -20.0f64..20.0, p in -5.0f64..5.0, phi in -3.0f64..3.0, zero_pi in any::<bool>()
    ) {
        let spec = if zero_pi {
            CircuitSpec::zero_pi(0.092, 1.14, 6.0, 0.38, 0.0, 0.3)
        } else {
            CircuitSpec::coupled_transmons([0.002, 0.003], [1.0, 1.0], 1.0)
        };
        let sel = ResonanceSelector::default();
        let a = reduce_to_resonance(&spec, &sel, j).unwrap().energy(p, phi);
        let b = reduce_to_resonance(&spec.scaled(c), &sel, j).unwrap().energy(p, phi);
        prop_assert!((b - c * a).abs() <= 1e-10 * (c * a).abs().max(1.0));
    }

    #[test]
    fn tunneling_increases_with_energy(amp in 0.1f64..2.0, alpha in 0.005f64..0.1, k in 1i32..4) {
        let m = ResonantModel::pendulum(alpha, amp, k, 0.0).unwrap();
        let energies: Vec<f64> = (1..100).map(|i| -amp + 2.0 * amp * i as f64 / 100.0).collect();
        let t: Vec<f64> = energies.iter().map(|&e| wkb_tunneling(&m, e, 1.0).unwrap()).collect();
        prop_assert!(t.windows(2).all(|w| w[1] > w[0] || (w[0] == 0.0 && w[1] == 0.0)));
    }
}
