//! Seeded synthetic ensembles used as calibration references.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, Exp1, StandardNormal};

use crate::circuit::{HermitianOperator, OperatorBasis};
use crate::error::{invalid, Result};
use crate::linalg::tql;
use crate::spectrum::{eigendecompose, unfold_levels, UnfoldedSpectrum};

use super::laws::brody_quantile;
use super::stats::{ensemble_from_levels, SpacingEnsemble};

pub const MIN_SAMPLE_SIZE: usize = 100;
/// Unfolding of the central half of a GOE spectrum.
const GOE_TRIM: f64 = 0.25;
const GOE_DEGREE: usize = 6;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_n(n: usize) -> Result<()> {
    if n < MIN_SAMPLE_SIZE {
        Err(invalid(format!("sample size must be >= {MIN_SAMPLE_SIZE}, got {n}")))
    } else {
        Ok(())
    }
}

/// Eigenvalues of an `n × n` GOE matrix (diagonal variance 1, off-diagonal
/// variance 1/2), drawn through the tridiagonal β = 1 Hermite model, whose
/// eigenvalue law is identical to the dense ensemble at `O(n²)` cost.
pub fn goe_eigenvalues(n: usize, seed: u64) -> Result<Vec<f64>> {
    check_n(n)?;
    let mut r = rng(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut d: Vec<f64> = (0..n)
        .map(|_| {
            let g: f64 = r.sample(StandardNormal);
            g * 2f64.sqrt() * scale
        })
        .collect();
    let e: Vec<f64> = (1..n)
        .map(|k| {
            let dof = (n - k) as f64;
            let chi2 = ChiSquared::new(dof).expect("positive degrees of freedom");
            chi2.sample(&mut r).sqrt() * scale
        })
        .collect();
    tql(&mut d, &e, None)?;
    Ok(d)
}

/// Eigenvalues of an explicitly assembled dense GOE matrix. Slower twin of
/// [`goe_eigenvalues`] kept as a cross-check.
pub fn goe_eigenvalues_dense(n: usize, seed: u64) -> Result<Vec<f64>> {
    check_n(n)?;
    let mut r = rng(seed);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let g: f64 = r.sample(StandardNormal);
            let v = if i == j { g } else { g * std::f64::consts::FRAC_1_SQRT_2 };
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
    let op = HermitianOperator::from_dense(n, &a, OperatorBasis::Unspecified)?;
    Ok(eigendecompose(&op, false)?.levels().to_vec())
}

/// Central half of a GOE spectrum, unfolded.
pub fn goe_unfolded(n: usize, seed: u64) -> Result<UnfoldedSpectrum> {
    unfold_levels(&goe_eigenvalues(n, seed)?, GOE_DEGREE, GOE_TRIM)
}

/// Spacings and ratios of the unfolded central half of an `n × n` GOE
/// matrix.
pub fn sample_goe(n: usize, seed: u64) -> Result<SpacingEnsemble> {
    let u = goe_unfolded(n, seed)?;
    ensemble_from_levels(&u.unfolded, format!("goe(n={n}, seed={seed})"))
}

/// Dense-matrix variant of [`sample_goe`].
pub fn sample_goe_dense(n: usize, seed: u64) -> Result<SpacingEnsemble> {
    let u = unfold_levels(&goe_eigenvalues_dense(n, seed)?, GOE_DEGREE, GOE_TRIM)?;
    ensemble_from_levels(&u.unfolded, format!("goe-dense(n={n}, seed={seed})"))
}

fn ladder(spacings: &[f64]) -> Vec<f64> {
    let mut levels = Vec::with_capacity(spacings.len() + 1);
    let mut e = 0.0;
    levels.push(e);
    for s in spacings {
        e += s;
        levels.push(e);
    }
    levels
}

/// `n` independent unit-mean exponential spacings.
pub fn sample_poisson(n: usize, seed: u64) -> Result<SpacingEnsemble> {
    check_n(n)?;
    let mut r = rng(seed);
    let s: Vec<f64> = (0..n).map(|_| r.sample::<f64, _>(Exp1)).collect();
    ensemble_from_levels(&ladder(&s), format!("poisson(n={n}, seed={seed})"))
}

/// `n` Brody(q) spacings by inverse-CDF sampling.
pub fn sample_brody(n: usize, q: f64, seed: u64) -> Result<SpacingEnsemble> {
    check_n(n)?;
    let mut r = rng(seed);
    let s = (0..n)
        .map(|_| brody_quantile(r.random::<f64>(), q))
        .collect::<Result<Vec<f64>>>()?;
    ensemble_from_levels(&ladder(&s), format!("brody(q={q}, n={n}, seed={seed})"))
}
