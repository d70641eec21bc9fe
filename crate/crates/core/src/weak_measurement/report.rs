use crate::estimation::DensityEstimate;
use crate::format::fmt_f64;

/// Detector-resolution checks on a measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionFlags {
    /// Detector resolution Δt in units of 1/γ.
    pub resolution: f64,
    /// δτ_measured < Δt: the components cannot be told apart directly.
    pub dgd_unresolved: bool,
    /// |⟨t⟩| > Δt: the post-selected shift is detectable.
    pub shift_resolved: bool,
}

impl ResolutionFlags {
    pub fn new(resolution: f64, dgd_measured: f64, mean_arrival: f64) -> Self {
        ResolutionFlags {
            resolution,
            dgd_unresolved: dgd_measured.abs() < resolution,
            shift_resolved: mean_arrival.abs() > resolution,
        }
    }
}

/// Everything measured at one operating point. Times are in units of 1/γ.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementReport {
    /// Centroid of the post-selected intensity, τ = 0 at vacuum arrival.
    pub mean_arrival: f64,
    /// Centroid relative to the midpoint of the σ± peaks.
    pub mean_shift: f64,
    /// Peak of the post-selected output minus peak of the input.
    pub output_peak_shift: f64,
    /// Group-index delay; `None` when the derivative stencil is unresolved.
    pub dgd_analytic: Option<f64>,
    pub dgd_measured: f64,
    /// 2|⟨t⟩| tan β.
    pub dgd_inferred: f64,
    /// 2|⟨t⟩| / Re W(β, φ) with the model carrier phase.
    pub dgd_inferred_phase_aware: Option<f64>,
    /// Re W from the absorptive expression at the measured (φ, η).
    pub weak_value_re: f64,
    /// Energy-based amplitude ratio.
    pub eta: f64,
    pub eta_peak: f64,
    /// Post-selected output energy over input energy.
    pub energy_fraction: f64,
    /// Post-selected peak intensity over input peak intensity.
    pub peak_ratio: f64,
    /// Carrier phase difference in (−π, π].
    pub phase_phi: f64,
    pub calibration: f64,
    pub flags: ResolutionFlags,
    pub density: Option<DensityEstimate>,
    /// Input provenance as (key, value) pairs.
    pub config_echo: Vec<(String, String)>,
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

impl MeasurementReport {
    /// Values matching [`MeasurementReport::COLUMNS`].
    pub fn values(&self) -> Vec<String> {
        let d = self.density.as_ref();
        vec![
            fmt_f64(self.mean_arrival),
            fmt_f64(self.mean_shift),
            fmt_f64(self.output_peak_shift),
            opt(self.dgd_analytic),
            fmt_f64(self.dgd_measured),
            fmt_f64(self.dgd_inferred),
            opt(self.dgd_inferred_phase_aware),
            fmt_f64(self.weak_value_re),
            fmt_f64(self.eta),
            fmt_f64(self.eta_peak),
            fmt_f64(self.energy_fraction),
            fmt_f64(self.peak_ratio),
            fmt_f64(self.phase_phi),
            fmt_f64(self.calibration),
            fmt_f64(self.flags.resolution),
            self.flags.dgd_unresolved.to_string(),
            self.flags.shift_resolved.to_string(),
            opt(d.map(|d| d.n_hat)),
            opt(d.map(|d| d.kappa)),
            d.map(|d| d.method.as_str().to_string()).unwrap_or_default(),
            opt(d.and_then(|d| d.rel_error_model)),
        ]
    }

    pub const COLUMNS: [&'static str; 21] = [
        "mean_arrival",
        "mean_shift",
        "output_peak_shift",
        "dgd_analytic",
        "dgd_measured",
        "dgd_inferred",
        "dgd_inferred_phase_aware",
        "weak_value_re",
        "eta",
        "eta_peak",
        "energy_fraction",
        "peak_ratio",
        "phase_phi",
        "calibration",
        "detector_resolution",
        "dgd_unresolved",
        "shift_resolved",
        "density_estimate",
        "kappa",
        "density_method",
        "absorption_rel_error",
    ];

    pub fn csv_row(&self) -> String {
        self.values().join(",")
    }

    /// `key = value` lines: the configuration echo followed by the columns.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.config_echo {
            s.push_str(&format!("{k} = {v}\n"));
        }
        for (k, v) in Self::COLUMNS.iter().zip(self.values()) {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blank() -> MeasurementReport {
        MeasurementReport {
            mean_arrival: 0.0,
            mean_shift: 0.0,
            output_peak_shift: 0.0,
            dgd_analytic: None,
            dgd_measured: 0.0,
            dgd_inferred: 0.0,
            dgd_inferred_phase_aware: None,
            weak_value_re: 0.0,
            eta: 0.0,
            eta_peak: 0.0,
            energy_fraction: 0.0,
            peak_ratio: 0.0,
            phase_phi: 0.0,
            calibration: 1.0,
            flags: ResolutionFlags::new(1.0, 0.0, 0.0),
            density: None,
            config_echo: Vec::new(),
        }
    }

    #[test]
    fn columns_and_values_have_the_same_width() {
        assert_eq!(MeasurementReport::COLUMNS.len(), blank().values().len());
        assert_eq!(blank().csv_row().split(',').count(), 21);
    }

    #[test]
    fn resolution_flags() {
        let f = ResolutionFlags::new(6.0, 3.0, -20.0);
        assert!(f.dgd_unresolved);
        assert!(f.shift_resolved);
    }

    #[test]
    fn kv_output_contains_echo_first() {
        let mut r = blank();
        r.config_echo.push(("atomic.rabi".into(), "0.03".into()));
        let kv = r.to_kv();
        assert!(kv.starts_with("atomic.rabi = 0.03\n"));
        assert!(kv.contains("mean_arrival = 0\n"));
    }
}
