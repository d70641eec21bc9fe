//! Polarization pre- and post-selection, the post-selected centroid and the
//! weak-value relations linking it to the differential group delay.

mod projection;
mod report;
mod weak_value;

pub use projection::{
    amplitude_ratio, delayed, intensity_terms, mean_arrival, output_intensity,
    peak_amplitude_ratio, postselect, IntensityTerms, PostSelection, EXTINCTION_THRESHOLD,
};
pub use report::{MeasurementReport, ResolutionFlags};
pub use weak_value::{
    infer_dgd, mean_arrival_model, weak_value, weak_value_absorptive, InferenceMode, PhaseModel,
};
