//! Scoring of a parameter set against the four protection criteria.

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitFamily, CircuitSpec};

/// Thresholds of the four criteria. The defaults are a quantitative
/// reading of qualitative requirements and can be overridden.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtectionThresholds {
    /// Criterion 1: Brody `q` below this.
    pub brody_q_max: f64,
    /// Criterion 2: operating energy at most this fraction of the island
    /// depth above the elliptic point.
    pub operating_window: f64,
    /// Criterion 2: tunneling probability below this.
    pub tunneling_max: f64,
    /// Criterion 3: KS distance to Poisson below this.
    pub ks_poisson_max: f64,
}

impl Default for ProtectionThresholds {
    fn default() -> Self {
        Self {
            brody_q_max: 0.3,
            operating_window: 0.1,
            tunneling_max: 1e-4,
            ks_poisson_max: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub rule: String,
}

/// Measured quantities behind the verdicts. Missing values (a failed
/// sub-run, or no separatrix) fail the criteria that need them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtectionMeasurements {
    pub brody_q: Option<f64>,
    pub ks_poisson: Option<f64>,
    /// Separatrix energy minus elliptic energy (GHz); 0 without a separatrix.
    pub island_depth: f64,
    pub elliptic_energy: Option<f64>,
    pub operating_energy: Option<f64>,
    pub tunneling_at_operating_energy: Option<f64>,
    pub compact_phase_space: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtectionReport {
    #[serde(flatten)]
    pub measurements: ProtectionMeasurements,
    pub thresholds: ProtectionThresholds,
    pub verdicts: Vec<Verdict>,
    pub complete: bool,
    pub errors: Vec<String>,
}

/// True when every mode is periodic or confined by an inductive term.
pub fn compact_phase_space(spec: &CircuitSpec) -> bool {
    match spec.family {
        CircuitFamily::SingleTransmon | CircuitFamily::CoupledTransmons => true,
        CircuitFamily::ZeroPi => spec.el > 0.0,
    }
}

fn within(x: Option<f64>, max: f64) -> bool {
    x.is_some_and(|v| v < max)
}

/// Pass/fail of criteria 1 to 4, in order.
pub fn evaluate(m: &ProtectionMeasurements, t: &ProtectionThresholds) -> [bool; 4] {
    let island = m.island_depth > 0.0
        && match (m.elliptic_energy, m.operating_energy) {
            (Some(ell), Some(op)) => {
                let above = op - ell;
                above >= 0.0 && above <= t.operating_window * m.island_depth
            }
            _ => false,
        }
        && within(m.tunneling_at_operating_energy, t.tunneling_max);
    [
        within(m.brody_q, t.brody_q_max),
        island,
        within(m.ks_poisson, t.ks_poisson_max),
        m.compact_phase_space,
    ]
}

impl ProtectionReport {
    pub fn new(measurements: ProtectionMeasurements, thresholds: ProtectionThresholds, errors: Vec<String>) -> Self {
        let passed = evaluate(&measurements, &thresholds);
        let t = &thresholds;
        let rules = [
            ("weak_nonlinearity", format!("brody_q < {:?}", t.brody_q_max)),
            (
                "operating_point_in_island",
                format!(
                    "island_depth > 0 and 0 <= operating - elliptic <= {:?} * island_depth and tunneling < {:?}",
                    t.operating_window, t.tunneling_max
                ),
            ),
            ("poisson_statistics", format!("ks_poisson < {:?}", t.ks_poisson_max)),
            ("compact_phase_space", "all modes periodic or confined".to_string()),
        ];
        let verdicts = rules
            .into_iter()
            .zip(passed)
            .enumerate()
            .map(|(i, ((name, rule), passed))| Verdict {
                criterion: i as u8 + 1,
                name: name.to_string(),
                passed,
                rule,
            })
            .collect();
        Self {
            measurements,
            thresholds,
            verdicts,
            complete: errors.is_empty(),
            errors,
        }
    }

    /// Re-derives the verdicts from the stored numbers and thresholds.
    pub fn recompute(&self) -> [bool; 4] {
        evaluate(&self.measurements, &self.thresholds)
    }

    pub fn is_consistent(&self) -> bool {
        let stored: Vec<bool> = self.verdicts.iter().map(|v| v.passed).collect();
        stored == self.recompute()
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}
