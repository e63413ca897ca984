//! The three model studies: two coupled spins, the quenched XY chain and a
//! dephasing spin in a bosonic bath.

pub mod spin_boson;
pub mod two_spin;
pub mod xy;

pub use spin_boson::{
    spin_boson_bound, spin_boson_bound_series, spin_boson_build, spin_boson_energy, spin_boson_energy_rate, BoundPath, SpinBosonBound,
    SpinBosonParams, SpinBosonSeries,
};
pub use two_spin::{
    two_spin_bound_a, two_spin_build, two_spin_power, two_spin_power_bound_c, two_spin_work, Protocol, TwoSpinParams,
};
pub use xy::{
    xy_h0_coherence_smallN, xy_modes, xy_power, xy_state_coherence, xy_work, xy_work_bound_a, XYChainParams,
    XYModeData,
};
