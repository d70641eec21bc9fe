//! Configuration loading, sweeps, figure datasets and report emission.

mod config;
mod figures;
mod run;

pub use config::{
    load_config, parse_config, CalibrationRoute, MeasurementSettings, OutputFormat, OutputSpec,
    RunConfig, Sweep, SweepVariable, CALIBRATION_TARGET_DGD, FIG3_BETAS,
};
pub use figures::{mean_arrival_slope, reproduce_figure, Dataset};
pub use run::{
    apply_sweep_value, calibrate, provenance_header, regression, run_sweep, simulate_fields,
    simulate_point, write_sweep_csv, PointFields, SweepRow, SweepTable, THREADS_ENV,
};
