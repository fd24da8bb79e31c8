//! Fixtures shared by the benchmarks.

use qprot_core::classical::reduce_to_resonance;
use qprot_core::{BasisSpec, CircuitSpec, HermitianOperator, ResonanceSelector, ResonantModel};

/// Coupled transmons at the chaotic-side parameters.
pub fn coupled_pair() -> CircuitSpec {
    CircuitSpec::coupled_transmons([0.002, 0.003], [1.0, 1.0], 1.0)
}

pub fn coupled_hamiltonian(charge_cutoff: usize) -> HermitianOperator {
    qprot_core::circuit::build_hamiltonian(&coupled_pair(), &BasisSpec::charge(charge_cutoff)).expect("valid basis")
}

/// Resonant pendulum of the coupled pair at `J = 0`.
pub fn pendulum() -> ResonantModel {
    reduce_to_resonance(&coupled_pair(), &ResonanceSelector::default(), 0.0).expect("1:1 reduction")
}
