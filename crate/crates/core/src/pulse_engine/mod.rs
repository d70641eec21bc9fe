//! Probe pulse construction, propagation of the σ± components and
//! time-domain delay measurement.

mod envelope;
mod probe;
mod propagate;

pub use envelope::{measured_dgd, peak_time, peak_time_of, Component, FieldEnvelope};
pub use probe::{DipoleConvention, GridSpec, ProbeConfig};
pub use propagate::{
    check_aliasing, gaussian_spectrum, input_envelope, propagate, Spectrum, Synthesizer,
    EDGE_ENERGY_LIMIT, EDGE_FRACTION,
};
