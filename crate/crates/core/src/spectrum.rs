//! Eigendecomposition, truncation-convergence certificates and unfolding.

use crate::circuit::{build_hamiltonian, BasisSpec, CircuitSpec, HermitianOperator};
use crate::error::{invalid, Error, Result};
use crate::linalg::{least_squares, symmetric_eigen};

/// Growth factor applied to every cutoff by the convergence certificate.
pub const CERTIFICATE_GROWTH: f64 = 1.4;

/// Sorted eigenvalues with optional eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    levels: Vec<f64>,
    /// Row-per-vector: component `i` of vector `k` is `vectors[k * dim + i]`.
    vectors: Option<Vec<f64>>,
    dim: usize,
    converged_count: usize,
}

impl Spectrum {
    /// Wraps raw levels (sorted here); all of them count as converged.
    pub fn from_levels(mut levels: Vec<f64>) -> Result<Self> {
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(invalid("levels must be finite"));
        }
        levels.sort_by(f64::total_cmp);
        let converged_count = levels.len();
        Ok(Self {
            dim: levels.len(),
            levels,
            vectors: None,
            converged_count,
        })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn converged_count(&self) -> usize {
        self.converged_count
    }

    /// The certified low-lying part of the spectrum.
    pub fn converged_levels(&self) -> &[f64] {
        &self.levels[..self.converged_count]
    }

    pub fn set_converged_count(&mut self, m: usize) {
        self.converged_count = m.min(self.levels.len());
    }

    /// Dimension of the Hilbert space the vectors live in.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_vectors(&self) -> bool {
        self.vectors.is_some()
    }

    /// Eigenvector belonging to `levels()[k]`.
    pub fn vector(&self, k: usize) -> Option<&[f64]> {
        let n = self.dim;
        self.vectors.as_ref().map(|v| &v[k * n..(k + 1) * n])
    }

    /// Lowest `m` levels (and vectors); the converged count is clipped.
    pub fn truncated(&self, m: usize) -> Self {
        let m = m.min(self.levels.len());
        let n = self.dim;
        Self {
            dim: n,
            levels: self.levels[..m].to_vec(),
            vectors: self.vectors.as_ref().map(|v| v[..m * n].to_vec()),
            converged_count: self.converged_count.min(m),
        }
    }
}

/// All eigenvalues of `op`, ascending, plus orthonormal eigenvectors on
/// request. The result starts with `converged_count == len`.
pub fn eigendecompose(op: &HermitianOperator, want_vectors: bool) -> Result<Spectrum> {
    let (levels, vectors) = symmetric_eigen(op.matrix(), want_vectors)?;
    let converged_count = levels.len();
    Ok(Spectrum {
        dim: op.dim(),
        levels,
        vectors,
        converged_count,
    })
}

fn stable_prefix(a: &[f64], b: &[f64], k: usize, tol: f64) -> usize {
    a.iter()
        .zip(b)
        .take(k)
        .take_while(|(x, y)| (*x - *y).abs() < tol)
        .count()
}

/// Largest `m <= k` such that the lowest `m` levels move by less than `tol`
/// (GHz) when every cutoff grows by 40%.
pub fn certify_convergence(spec: &CircuitSpec, basis: &BasisSpec, k: usize, tol: f64) -> Result<usize> {
    Ok(certified_spectrum(spec, basis, k, tol, false)?.converged_count())
}

/// Spectrum at `basis` whose `converged_count` is the certificate of
/// [`certify_convergence`].
pub fn certified_spectrum(
    spec: &CircuitSpec,
    basis: &BasisSpec,
    k: usize,
    tol: f64,
    want_vectors: bool,
) -> Result<Spectrum> {
    if k < 1 {
        return Err(invalid("certificate needs k >= 1"));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be > 0, got {tol}")));
    }
    let mut base = eigendecompose(&build_hamiltonian(spec, basis)?, want_vectors)?;
    let larger = eigendecompose(&build_hamiltonian(spec, &basis.enlarged(CERTIFICATE_GROWTH))?, false)?;
    let m = stable_prefix(base.levels(), larger.levels(), k, tol);
    base.set_converged_count(m);
    Ok(base)
}

/// Levels mapped onto a unit-mean-spacing scale.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedSpectrum {
    pub unfolded: Vec<f64>,
    pub trim_fraction: f64,
    pub poly_degree: usize,
}

impl UnfoldedSpectrum {
    pub fn len(&self) -> usize {
        self.unfolded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unfolded.is_empty()
    }

    pub fn mean_spacing(&self) -> f64 {
        let n = self.unfolded.len();
        if n < 2 {
            return f64::NAN;
        }
        (self.unfolded[n - 1] - self.unfolded[0]) / (n - 1) as f64
    }
}

pub const DEFAULT_POLY_DEGREE: usize = 6;
pub const DEFAULT_TRIM_FRACTION: f64 = 0.1;
pub const MIN_UNFOLD_LEVELS: usize = 50;

/// Chebyshev polynomials `T_0..=T_deg` at `x`.
fn chebyshev_row(x: f64, deg: usize, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if deg >= 1 {
        out.push(x);
    }
    for k in 2..=deg {
        let t = 2.0 * x * out[k - 1] - out[k - 2];
        out.push(t);
    }
}

/// Unfolds the converged levels of `spectrum`.
///
/// `trim_fraction` of the levels is dropped at each edge, then the staircase
/// `N(E)` of the remainder is fitted by a least-squares polynomial of degree
/// `poly_degree` and each level is mapped to `N_fit(E)`. Energies are
/// normalized to `[-1, 1]` and the fit uses a Chebyshev basis, which makes
/// the result independent of affine rescaling of the input.
pub fn unfold(spectrum: &Spectrum, poly_degree: usize, trim_fraction: f64) -> Result<UnfoldedSpectrum> {
    unfold_levels(spectrum.converged_levels(), poly_degree, trim_fraction)
}

pub fn unfold_levels(levels: &[f64], poly_degree: usize, trim_fraction: f64) -> Result<UnfoldedSpectrum> {
    if !(2..=12).contains(&poly_degree) {
        return Err(invalid(format!("poly_degree must be in 2..=12, got {poly_degree}")));
    }
    if !(0.0..0.4).contains(&trim_fraction) {
        return Err(invalid(format!("trim_fraction must be in [0, 0.4), got {trim_fraction}")));
    }
    let n = levels.len();
    let cut = (trim_fraction * n as f64).floor() as usize;
    let kept = &levels[cut..n - cut];
    if kept.len() < MIN_UNFOLD_LEVELS {
        return Err(Error::InsufficientData {
            needed: MIN_UNFOLD_LEVELS,
            got: kept.len(),
        });
    }
    if kept.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("levels must be sorted"));
    }
    let lo = kept[0];
    let hi = kept[kept.len() - 1];
    if !(hi > lo) {
        return Err(invalid("levels span a zero-width interval"));
    }
    let center = 0.5 * (hi + lo);
    let half = 0.5 * (hi - lo);
    let xs: Vec<f64> = kept.iter().map(|e| (e - center) / half).collect();

    let cols = poly_degree + 1;
    let mut design = Vec::with_capacity(xs.len() * cols);
    let mut row = Vec::with_capacity(cols);
    for &x in &xs {
        chebyshev_row(x, poly_degree, &mut row);
        design.extend_from_slice(&row);
    }
    let staircase: Vec<f64> = (0..xs.len()).map(|i| i as f64 + 0.5).collect();
    let coef = least_squares(&design, xs.len(), cols, &staircase)?;

    let unfolded = design
        .chunks_exact(cols)
        .map(|r| r.iter().zip(&coef).map(|(a, c)| a * c).sum())
        .collect();
    Ok(UnfoldedSpectrum {
        unfolded,
        trim_fraction,
        poly_degree,
    })
}
