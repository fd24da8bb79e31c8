//! Run configuration, read from TOML.

use std::path::{Path, PathBuf};

use qprot_core::rmt::DEFAULT_BINS;
use qprot_core::spectrum::{DEFAULT_POLY_DEGREE, DEFAULT_TRIM_FRACTION};
use qprot_core::{BasisSpec, CircuitSpec, ProtectionThresholds, ResonanceSelector, TunnelingFormula};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub circuit: CircuitSpec,
    /// Filled with the family default when absent.
    #[serde(default)]
    pub basis: Option<BasisSpec>,
    #[serde(default)]
    pub selector: ResonanceSelector,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub stats: StatsConfig,
    #[serde(default)]
    pub semiclassics: SemiclassicsConfig,
    #[serde(default)]
    pub portrait: PortraitConfig,
    #[serde(default)]
    pub protection: ProtectionConfig,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    /// Absolute tolerance (GHz) of the convergence certificate.
    pub convergence_tol: f64,
    /// Certify at most this many levels; all of them when absent.
    pub max_levels: Option<usize>,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { convergence_tol: 1e-6, max_levels: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsConfig {
    pub bins: usize,
    pub poly_degree: usize,
    pub trim_fraction: f64,
    /// Lowest converged levels entering the statistics.
    pub level_count: usize,
}

impl Default for StatsConfig {
    fn default() -> Self {
        Self {
            bins: DEFAULT_BINS,
            poly_degree: DEFAULT_POLY_DEGREE,
            trim_fraction: DEFAULT_TRIM_FRACTION,
            level_count: 400,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SemiclassicsConfig {
    pub hbar_eff: f64,
    /// Slow action `J` at which the reduction is taken.
    pub j: f64,
    pub formula: TunnelingFormula,
    pub tunneling_points: usize,
    pub state_count: usize,
    pub state_points: Option<usize>,
    /// Half-width of the box for non-periodic models.
    pub state_halfwidth: Option<f64>,
}

impl Default for SemiclassicsConfig {
    fn default() -> Self {
        Self {
            hbar_eff: 1.0,
            j: 0.0,
            formula: TunnelingFormula::Kemble,
            tunneling_points: 200,
            state_count: 10,
            state_points: None,
            state_halfwidth: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PortraitConfig {
    pub phi_points: Option<usize>,
    pub p_points: Option<usize>,
    /// Contour energies; derived from the island when absent.
    pub energies: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtectionConfig {
    /// Operating energy as a fraction of the island depth above the
    /// elliptic point.
    pub operating_fraction: f64,
    /// Absolute operating energy (GHz); overrides `operating_fraction`.
    pub operating_energy: Option<f64>,
    pub thresholds: ProtectionThresholds,
}

impl Default for ProtectionConfig {
    fn default() -> Self {
        Self {
            operating_fraction: 0.01,
            operating_energy: None,
            thresholds: ProtectionThresholds::default(),
        }
    }
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub levels: Option<usize>,
    pub beta: Option<f64>,
    pub phi_ext: Option<f64>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.basis.is_none() {
            cfg.basis = Some(BasisSpec::default_for(cfg.circuit.family));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(out) = &o.out {
            self.output_dir = out.clone();
        }
        if let Some(seed) = o.seed {
            self.seeds = vec![seed];
        }
        if let Some(n) = o.levels {
            self.stats.level_count = n;
        }
        if let Some(b) = o.beta {
            self.circuit.beta = b;
        }
        if let Some(x) = o.phi_ext {
            self.circuit.phi_ext = x;
        }
        self.validate()
    }

    pub fn basis(&self) -> BasisSpec {
        self.basis.unwrap_or_else(|| BasisSpec::default_for(self.circuit.family))
    }

    /// Seed of the run: the first configured one.
    pub fn seed(&self) -> u64 {
        self.seeds.first().copied().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if let Err(e) = self.circuit.validate().and_then(|_| self.basis().check_family(self.circuit.family)) {
            return bad(e.to_string());
        }
        let s = &self.stats;
        if s.bins == 0 || s.poly_degree == 0 {
            return bad("stats.bins and stats.poly_degree must be >= 1".into());
        }
        if !(0.0..0.5).contains(&s.trim_fraction) {
            return bad(format!("stats.trim_fraction must lie in [0, 0.5), got {}", s.trim_fraction));
        }
        if s.level_count < 2 {
            return bad("stats.level_count must be >= 2".into());
        }
        if !(self.spectrum.convergence_tol > 0.0) {
            return bad("spectrum.convergence_tol must be > 0".into());
        }
        let q = &self.semiclassics;
        if !(q.hbar_eff > 0.0 && q.hbar_eff.is_finite()) {
            return bad(format!("semiclassics.hbar_eff must be > 0, got {}", q.hbar_eff));
        }
        if q.tunneling_points < 2 || q.state_count == 0 {
            return bad("semiclassics.tunneling_points must be >= 2 and state_count >= 1".into());
        }
        if self.seeds.is_empty() {
            return bad("seeds must not be empty".into());
        }
        let p = &self.protection;
        if !(p.operating_fraction >= 0.0) {
            return bad("protection.operating_fraction must be >= 0".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qprot_core::CircuitFamily;

    const MINIMAL: &str = r#"
        [circuit]
        family = "coupled_transmons"
        ec = [0.002, 0.003]
        ej = [1.0, 1.0]
        beta = 1.0
    "#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(c.basis(), BasisSpec::default_for(CircuitFamily::CoupledTransmons));
        assert_eq!(c.selector, ResonanceSelector::default());
        assert_eq!(c.stats.level_count, 400);
        assert_eq!(c.seed(), 0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{MINIMAL}\n[stats]\nlevels = 3\n");
        assert!(matches!(RunConfig::from_toml_str(&text), Err(CliError::Config(_))));
    }

    #[test]
    fn invalid_selector_is_rejected() {
        let text = format!("{MINIMAL}\n[selector]\nm = 2\nn = 2\nl1 = 1\nl2 = 1\n");
        assert!(RunConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn overrides_apply() {
        let mut c = RunConfig::from_toml_str(MINIMAL).unwrap();
        let o = Overrides { seed: Some(7), levels: Some(100), beta: Some(0.5), ..Default::default() };
        c.apply(&o).unwrap();
        assert_eq!((c.seed(), c.stats.level_count, c.circuit.beta), (7, 100, 0.5));
    }

    #[test]
    fn round_trips_through_toml() {
        let c = RunConfig::from_toml_str(MINIMAL).unwrap();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_toml_str(&text).unwrap(), c);
    }
}
