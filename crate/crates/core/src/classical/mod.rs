//! Classical resonance analysis: reduced models, fixed points, symplectic
//! trajectories and phase portraits.

mod fixed;
mod integrate;
mod model;
mod portrait;

pub use fixed::{
    find_fixed_points, island_depth, island_half_width, lowest_elliptic, lowest_hyperbolic, orbit_action,
    pendulum_separatrix_action, separatrix_action, separatrix_energy, FixedPoint, FixedPointKind,
};
pub use integrate::{
    integrate_trajectory, measured_period, monodromy, small_oscillation_period, SeparableHamiltonian, Trajectory,
    TwoModeClassical,
};
pub use model::{
    reduce_to_resonance, resonance_locus, Potential, ResonanceLocus, ResonanceSelector, ResonantModel, ZERO_PI_WINDOW,
};
pub use portrait::{phase_portrait, Contour, PhasePortrait, Polyline, PortraitGrid, MIN_GRID};
