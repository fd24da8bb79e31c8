//! Spacings, ratios, histograms, Brody fits and Kolmogorov–Smirnov distances.

use crate::error::{invalid, Error, Result};
use crate::quadrature::golden_section_min;
use crate::spectrum::UnfoldedSpectrum;

use super::laws::{brody_nu, cdf_reference, pdf_reference, ReferenceLaw};

/// Spacings below this are treated as degeneracies and dropped.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;
pub const MIN_LEVELS: usize = 50;
pub const MIN_KS_SAMPLES: usize = 50;
pub const MIN_FIT_SPACINGS: usize = 200;
pub const DEFAULT_BINS: usize = 30;
/// Histogram range `[0, HISTOGRAM_MAX]` for spacings and ratios.
pub const HISTOGRAM_MAX: f64 = 4.0;

/// Nearest-neighbour spacings and spacing ratios of one spectrum (or a pool
/// of spectra).
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingEnsemble {
    pub spacings: Vec<f64>,
    pub ratios_k1: Vec<f64>,
    pub ratios_k2: Vec<f64>,
    pub degeneracies: usize,
    pub source: String,
}

impl SpacingEnsemble {
    /// Concatenation of several ensembles.
    pub fn pooled(parts: &[SpacingEnsemble], source: impl Into<String>) -> Self {
        let mut out = SpacingEnsemble {
            spacings: Vec::new(),
            ratios_k1: Vec::new(),
            ratios_k2: Vec::new(),
            degeneracies: 0,
            source: source.into(),
        };
        for p in parts {
            out.spacings.extend_from_slice(&p.spacings);
            out.ratios_k1.extend_from_slice(&p.ratios_k1);
            out.ratios_k2.extend_from_slice(&p.ratios_k2);
            out.degeneracies += p.degeneracies;
        }
        out
    }

    pub fn mean_spacing(&self) -> f64 {
        mean(&self.spacings)
    }

    /// `⟨min(r, 1/r)⟩` over the adjacent-spacing ratios.
    pub fn mean_ratio_tilde(&self) -> f64 {
        mean_ratio_tilde(&self.ratios_k1)
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        f64::NAN
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

pub fn mean_ratio_tilde(ratios: &[f64]) -> f64 {
    mean(&ratios.iter().map(|&r| r.min(1.0 / r)).collect::<Vec<_>>())
}

/// Adjacent ratios `s_{i+1}/s_i` of a sorted level list, skipping pairs
/// that involve a degenerate spacing. Unchanged by `E → aE + b`, `a > 0`.
pub fn ratios_k1_from_levels(levels: &[f64]) -> Vec<f64> {
    levels
        .windows(3)
        .filter_map(|w| {
            let (a, b) = (w[1] - w[0], w[2] - w[1]);
            (a >= DEGENERACY_THRESHOLD && b >= DEGENERACY_THRESHOLD).then(|| b / a)
        })
        .collect()
}

/// Next-nearest ratios `(e_{i+4} − e_{i+2})/(e_{i+2} − e_i)` for every `i`.
pub fn ratios_k2_from_levels(levels: &[f64]) -> Vec<f64> {
    levels
        .windows(5)
        .filter_map(|w| {
            let (a, b) = (w[2] - w[0], w[4] - w[2]);
            (a >= DEGENERACY_THRESHOLD && b >= DEGENERACY_THRESHOLD).then(|| b / a)
        })
        .collect()
}

/// Spacings and ratios of an unfolded spectrum. Degenerate spacings are
/// dropped and counted; ratios touching them are skipped.
pub fn spacings_and_ratios(u: &UnfoldedSpectrum) -> Result<SpacingEnsemble> {
    ensemble_from_levels(&u.unfolded, "unfolded spectrum")
}

pub fn ensemble_from_levels(levels: &[f64], source: impl Into<String>) -> Result<SpacingEnsemble> {
    if levels.len() < MIN_LEVELS {
        return Err(Error::InsufficientData {
            needed: MIN_LEVELS,
            got: levels.len(),
        });
    }
    if levels.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(invalid("levels must be sorted and finite"));
    }
    let raw: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    let degeneracies = raw.iter().filter(|&&s| s < DEGENERACY_THRESHOLD).count();
    Ok(SpacingEnsemble {
        spacings: raw.into_iter().filter(|&s| s >= DEGENERACY_THRESHOLD).collect(),
        ratios_k1: ratios_k1_from_levels(levels),
        ratios_k2: ratios_k2_from_levels(levels),
        degeneracies,
        source: source.into(),
    })
}

/// Fixed-width histogram on `[lo, hi]`. Densities are normalized over the
/// in-range samples, so `Σ density · width = 1`; samples outside the range
/// are counted separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub densities: Vec<f64>,
    pub outside: usize,
}

impl Histogram {
    pub fn new(samples: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Self> {
        if bins == 0 || !(hi > lo) {
            return Err(invalid(format!("bad histogram shape: {bins} bins on [{lo}, {hi}]")));
        }
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|k| lo + k as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        let mut outside = 0;
        for &x in samples {
            if !(lo..=hi).contains(&x) {
                outside += 1;
                continue;
            }
            let k = (((x - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        let inside = (samples.len() - outside) as f64;
        let densities = counts
            .iter()
            .map(|&c| if inside > 0.0 { c as f64 / (inside * width) } else { 0.0 })
            .collect();
        Ok(Self {
            edges,
            counts,
            densities,
            outside,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn width(&self, k: usize) -> f64 {
        self.edges[k + 1] - self.edges[k]
    }
}

/// Least-squares Brody fit.
#[derive(Debug, Clone, PartialEq)]
pub struct BrodyFit {
    pub q: f64,
    pub nu: f64,
    pub residual: f64,
    pub bins: usize,
}

const Q_TOLERANCE: f64 = 1e-4;
const COARSE_STEPS: usize = 100;

fn brody_residual(hist: &Histogram, centers: &[f64], q: f64) -> f64 {
    let nu = brody_nu(q);
    centers
        .iter()
        .zip(&hist.densities)
        .map(|(&s, &d)| {
            let p = nu * (q + 1.0) * s.powf(q) * (-nu * s.powf(q + 1.0)).exp();
            (d - p).powi(2)
        })
        .sum()
}

/// Minimizes `Σ (density − P_B(center; q))²` over `q ∈ [0, 1]` on a
/// `bins`-bin histogram of the spacings on `[0, 4]`. A coarse scan picks the
/// basin, golden-section search refines it to 1e-4.
pub fn fit_brody(ensemble: &SpacingEnsemble, bins: usize) -> Result<BrodyFit> {
    let n = ensemble.spacings.len();
    if n < MIN_FIT_SPACINGS {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_SPACINGS,
            got: n,
        });
    }
    if !(10..=100).contains(&bins) {
        return Err(invalid(format!("bins must be in 10..=100, got {bins}")));
    }
    let hist = Histogram::new(&ensemble.spacings, bins, 0.0, HISTOGRAM_MAX)?;
    let centers = hist.centers();
    let f = |q: f64| brody_residual(&hist, &centers, q);

    let step = 1.0 / COARSE_STEPS as f64;
    let best = (0..=COARSE_STEPS)
        .map(|k| (k, f(k as f64 * step)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| k)
        .expect("non-empty scan");
    let lo = (best.saturating_sub(1)) as f64 * step;
    let hi = ((best + 1).min(COARSE_STEPS)) as f64 * step;
    let mut q = golden_section_min(f, lo, hi, Q_TOLERANCE).clamp(0.0, 1.0);
    // Keep whichever of the refined point and the bracket ends is lowest.
    for cand in [lo, hi] {
        if f(cand) < f(q) {
            q = cand;
        }
    }
    Ok(BrodyFit {
        q,
        nu: brody_nu(q),
        residual: f(q),
        bins,
    })
}

/// Sup-norm distance between the empirical distribution of `samples` and
/// the law's distribution function.
pub fn ks_distance(samples: &[f64], law: ReferenceLaw) -> Result<f64> {
    if samples.len() < MIN_KS_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_KS_SAMPLES,
            got: samples.len(),
        });
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf_reference(x.max(0.0), law)?;
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Density of a reference law on histogram centers, for overlays.
pub fn reference_curve(hist: &Histogram, law: ReferenceLaw) -> Result<Vec<f64>> {
    hist.centers().into_iter().map(|x| pdf_reference(x, law)).collect()
}

/// Everything the statistics stage reports about one ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralStatsReport {
    pub ensemble: SpacingEnsemble,
    pub brody: BrodyFit,
    pub ks_poisson: f64,
    pub ks_wigner: f64,
    pub ks_ratio_k1_poisson: f64,
    pub ks_ratio_k1_goe: f64,
    pub mean_ratio_tilde: f64,
    pub mean_ratio_tilde_k2: f64,
    pub hist_spacing: Histogram,
    pub hist_ratio_k1: Histogram,
    pub hist_ratio_k2: Histogram,
}

pub fn analyze(ensemble: SpacingEnsemble, bins: usize) -> Result<SpectralStatsReport> {
    let brody = fit_brody(&ensemble, bins)?;
    Ok(SpectralStatsReport {
        ks_poisson: ks_distance(&ensemble.spacings, ReferenceLaw::PoissonSpacing)?,
        ks_wigner: ks_distance(&ensemble.spacings, ReferenceLaw::WignerSpacing)?,
        ks_ratio_k1_poisson: ks_distance(&ensemble.ratios_k1, ReferenceLaw::PoissonRatioK1)?,
        ks_ratio_k1_goe: ks_distance(&ensemble.ratios_k1, ReferenceLaw::GoeRatioK1)?,
        mean_ratio_tilde: mean_ratio_tilde(&ensemble.ratios_k1),
        mean_ratio_tilde_k2: mean_ratio_tilde(&ensemble.ratios_k2),
        hist_spacing: Histogram::new(&ensemble.spacings, bins, 0.0, HISTOGRAM_MAX)?,
        hist_ratio_k1: Histogram::new(&ensemble.ratios_k1, bins, 0.0, HISTOGRAM_MAX)?,
        hist_ratio_k2: Histogram::new(&ensemble.ratios_k2, bins, 0.0, HISTOGRAM_MAX)?,
        brody,
        ensemble,
    })
}
