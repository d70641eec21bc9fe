//! Steady state of the control-dressed four-level atom and the resulting
//! probe susceptibilities.

mod config;
mod steady_state;
mod susceptibility;

pub use config::{AtomicConfig, DecayRates, DephasingSource, Dephasings};
pub use steady_state::{
    probe_coherences, probe_coherences_with, zeroth_order, ProbeCoherences, ZerothOrderState,
};
pub use susceptibility::{
    analytic_dgd, carrier_phase, derivative_step, group_indices, susceptibility_curve, wrap_phase,
    AtomicSusceptibility, ConstantSusceptibility, GroupIndices, Prefactors, SusceptibilityCurve,
    SusceptibilityModel, STENCIL_TOLERANCE,
};
