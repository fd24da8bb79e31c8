use qprot_core::rmt::{
    fit_brody, ks_distance, mean_ratio_tilde, sample_brody, sample_goe, sample_poisson, Histogram, ReferenceLaw,
    SpacingEnsemble,
};
use qprot_core::Error;

#[test]
fn poisson_mean_min_ratio() {
    let e = sample_poisson(50_000, 3).unwrap();
    let want = 2.0 * 2f64.ln() - 1.0;
    assert!((e.mean_ratio_tilde() - want).abs() < 0.01);
}

#[test]
fn poisson_mean_spacing() {
    let e = sample_poisson(10_000, 7).unwrap();
    assert!((e.mean_spacing() - 1.0).abs() < 0.03);
}

#[test]
fn goe_mean_min_ratio() {
    // One n = 2000 draw keeps ~1000 ratios, so a single seed scatters by
    // about 0.01; the seed average is the sharp check.
    let per_seed: Vec<f64> = (0..20).map(|s| mean_ratio_tilde(&sample_goe(2000, s).unwrap().ratios_k1)).collect();
    assert!((per_seed[1] - 0.5307).abs() < 0.03);
    let mean = per_seed.iter().sum::<f64>() / 20.0;
    assert!((mean - 0.5307).abs() < 0.01, "{mean}");
}

#[test]
fn samplers_are_deterministic() {
    assert_eq!(sample_goe(500, 9).unwrap(), sample_goe(500, 9).unwrap());
    assert_eq!(sample_poisson(500, 9).unwrap(), sample_poisson(500, 9).unwrap());
    assert_ne!(sample_goe(500, 9).unwrap(), sample_goe(500, 10).unwrap());
}

#[test]
fn brody_fit_on_reference_samplers() {
    let p = sample_poisson(20_000, 5).unwrap();
    let q = fit_brody(&p, 30).unwrap().q;
    assert!((0.0..=0.05).contains(&q), "{q}");

    let parts: Vec<SpacingEnsemble> = (0..20).map(|s| sample_goe(2000, s).unwrap()).collect();
    let goe = SpacingEnsemble::pooled(&parts, "goe");
    assert!(goe.spacings.len() >= 20_000 - 100);
    let q = fit_brody(&goe, 30).unwrap().q;
    assert!((0.90..=1.0).contains(&q), "{q}");
}

#[test]
fn brody_parameter_recovery() {
    for (i, q0) in [0.0, 0.25, 0.5, 0.75, 1.0].into_iter().enumerate() {
        let e = sample_brody(20_000, q0, 100 + i as u64).unwrap();
        let fit = fit_brody(&e, 30).unwrap();
        assert!((fit.q - q0).abs() < 0.05, "q0 {q0} -> {}", fit.q);
        assert!((fit.nu - qprot_core::rmt::brody_nu(fit.q)).abs() < 1e-10);
    }
}

#[test]
fn ks_self_test() {
    let p = sample_poisson(10_000, 21).unwrap();
    assert!(ks_distance(&p.spacings, ReferenceLaw::PoissonSpacing).unwrap() < 0.02);
    let w = sample_brody(10_000, 1.0, 22).unwrap();
    assert!(ks_distance(&w.spacings, ReferenceLaw::WignerSpacing).unwrap() < 0.02);
    let b = sample_brody(10_000, 0.4, 23).unwrap();
    assert!(ks_distance(&b.spacings, ReferenceLaw::Brody(0.4)).unwrap() < 0.02);
}

#[test]
fn ks_needs_fifty_samples() {
    let xs = vec![1.0; 49];
    assert!(matches!(
        ks_distance(&xs, ReferenceLaw::PoissonSpacing),
        Err(Error::InsufficientData { needed: 50, got: 49 })
    ));
}

#[test]
fn histogram_densities_integrate_to_one() {
    let e = sample_poisson(5000, 2).unwrap();
    for bins in [10, 30, 100] {
        let h = Histogram::new(&e.spacings, bins, 0.0, 4.0).unwrap();
        let total: f64 = (0..h.bins()).map(|k| h.densities[k] * h.width(k)).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}
