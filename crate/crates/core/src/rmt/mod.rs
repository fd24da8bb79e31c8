//! Random-matrix spectral statistics.

mod laws;
mod sampling;
mod stats;

pub use laws::{brody_nu, brody_quantile, cdf_reference, goe_k2_normalization, pdf_reference, ReferenceLaw};
pub use sampling::{
    goe_eigenvalues, goe_eigenvalues_dense, goe_unfolded, rng, sample_brody, sample_goe, sample_goe_dense,
    sample_poisson, MIN_SAMPLE_SIZE,
};
pub use stats::{
    analyze, ensemble_from_levels, fit_brody, ks_distance, mean_ratio_tilde, ratios_k1_from_levels,
    ratios_k2_from_levels, reference_curve, spacings_and_ratios, BrodyFit, Histogram, SpacingEnsemble,
    SpectralStatsReport, DEFAULT_BINS, DEGENERACY_THRESHOLD, HISTOGRAM_MAX,
};
