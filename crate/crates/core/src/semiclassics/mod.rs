//! Semiclassical tunneling and quantized resonant states.

mod states;
mod tunneling;

pub use states::{
    solve_resonant_states, ResonantStates, StateBoundary, StateGrid, DEFAULT_STATE_POINTS, RESOLUTION_TOLERANCE,
};
pub use tunneling::{
    barrier_integral, tunneling_curve, tunneling_floor, wkb_tunneling, wkb_tunneling_with, BarrierRegime,
    TunnelingCurve, TunnelingEstimate, TunnelingFormula,
};
