//! Spectral statistics and classical resonance analysis of superconducting
//! qubit circuits.

pub mod circuit;
pub mod classical;
pub mod error;
pub mod linalg;
pub mod protection;
pub mod quadrature;
pub mod rmt;
pub mod semiclassics;
pub mod spectrum;

pub use circuit::{BasisSpec, CircuitFamily, CircuitSpec, HermitianOperator, PhaseGrid};
pub use classical::{ResonanceSelector, ResonantModel};
pub use error::{Error, Result};
pub use protection::{ProtectionReport, ProtectionThresholds};
pub use semiclassics::TunnelingFormula;
pub use spectrum::{Spectrum, UnfoldedSpectrum};
