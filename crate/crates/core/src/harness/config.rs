//! Declarative run configuration (TOML) with per-figure presets.
//!
//! Atomic frequencies and rates are in units of γ; every other physical
//! input carries its unit in the key name.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::atomic_response::{AtomicConfig, DecayRates, DephasingSource, Dephasings};
use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::pulse_engine::{DipoleConvention, GridSpec, ProbeConfig};
use crate::weak_measurement::PostSelection;

/// Peak-to-peak delay (1/γ) the calibration scalar is fitted to.
pub const CALIBRATION_TARGET_DGD: f64 = 305.0;

/// Fig. 3 β set.
pub const FIG3_BETAS: [f64; 4] = [0.1, 0.2, 0.3, 0.4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepVariable {
    /// Control half-Rabi frequency G/γ.
    G,
    /// Post-selection angle β in radians.
    #[serde(rename = "beta")]
    Beta,
    /// Spectral width σ/2π in Hz.
    #[serde(rename = "sigma")]
    Sigma,
    /// Number density in cm⁻³.
    N,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::G => "G",
            SweepVariable::Beta => "beta",
            SweepVariable::Sigma => "sigma",
            SweepVariable::N => "N",
        }
    }

    /// Column header naming the unit.
    pub fn column(&self) -> &'static str {
        match self {
            SweepVariable::G => "G_over_gamma",
            SweepVariable::Beta => "beta_rad",
            SweepVariable::Sigma => "sigma_over_2pi_hz",
            SweepVariable::N => "density_per_cm3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CalibrationRoute {
    /// Fit the simulated peak-to-peak delay.
    Measured,
    /// Fit the group-index delay.
    Analytic,
}

impl CalibrationRoute {
    pub fn as_str(&self) -> &'static str {
        match self {
            CalibrationRoute::Measured => "measured",
            CalibrationRoute::Analytic => "analytic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSettings {
    /// Detector resolution Δt in seconds.
    pub detector_resolution: f64,
    /// Relative transmission uncertainty dξ/ξ of the absorption route.
    pub absorption_rel_uncertainty: f64,
    pub calibration_route: CalibrationRoute,
}

impl Default for MeasurementSettings {
    fn default() -> Self {
        MeasurementSettings {
            detector_resolution: 1e-6,
            absorption_rel_uncertainty: 1e-3,
            calibration_route: CalibrationRoute::Measured,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Report,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub directory: PathBuf,
    pub formats: Vec<OutputFormat>,
    pub figure: Option<u32>,
    /// Also write a gnuplot script next to each figure dataset.
    pub gnuplot: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            directory: PathBuf::from("out"),
            formats: vec![OutputFormat::Csv, OutputFormat::Report],
            figure: None,
            gnuplot: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub atomic: AtomicConfig,
    pub probe: ProbeConfig,
    pub post_selection: PostSelection,
    pub measurement: MeasurementSettings,
    pub sweep: Option<Sweep>,
    pub output: OutputSpec,
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

impl RunConfig {
    /// The Fig. 1 parameter block with β = 0.1 and no sweep.
    pub fn fig1() -> Self {
        RunConfig {
            preset: Some("fig1".into()),
            atomic: AtomicConfig::fig1(),
            probe: ProbeConfig::fig1(),
            post_selection: PostSelection::default(),
            measurement: MeasurementSettings::default(),
            sweep: None,
            output: OutputSpec {
                figure: Some(1),
                ..OutputSpec::default()
            },
        }
    }

    /// Preset for figure `id`; every figure shares the Fig. 1 medium.
    pub fn preset(id: u32) -> Result<Self> {
        let mut cfg = RunConfig::fig1();
        cfg.preset = Some(format!("fig{id}"));
        cfg.output.figure = Some(id);
        let g_coarse = Sweep {
            variable: SweepVariable::G,
            values: (3..=30).map(|i| i as f64 / 100.0).collect(),
        };
        let g_fine = Sweep {
            variable: SweepVariable::G,
            values: linspace(0.03, 0.3, 50),
        };
        match id {
            1 | 6 => {}
            3 | 4 => cfg.sweep = Some(g_coarse),
            5 => cfg.sweep = Some(g_fine),
            7 => {
                cfg.probe.sigma *= 10.0;
                cfg.sweep = Some(g_fine);
            }
            other => return Err(Error::UnknownFigure(other)),
        }
        Ok(cfg)
    }

    pub fn preset_by_name(name: &str) -> Result<Self> {
        let id = name
            .strip_prefix("fig")
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| Error::invalid("preset", format!("unknown preset `{name}`")))?;
        RunConfig::preset(id)
            .map_err(|_| Error::invalid("preset", format!("unknown preset `{name}`")))
    }

    pub fn validate(&self) -> Result<()> {
        self.atomic.validate()?;
        self.probe.validate()?;
        self.post_selection.validate()?;
        let m = &self.measurement;
        if !(m.detector_resolution.is_finite() && m.detector_resolution > 0.0) {
            return Err(Error::invalid(
                "measurement.detector_resolution_us",
                "must be finite and > 0",
            ));
        }
        if !(m.absorption_rel_uncertainty.is_finite() && m.absorption_rel_uncertainty > 0.0) {
            return Err(Error::invalid(
                "measurement.absorption_rel_uncertainty",
                "must be finite and > 0",
            ));
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(Error::invalid("sweep.values", "must not be empty"));
            }
            if s.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("sweep.values", "must all be finite"));
            }
        }
        if let Some(id) = self.output.figure {
            if ![1, 3, 4, 5, 6, 7].contains(&id) {
                return Err(Error::UnknownFigure(id));
            }
        }
        if self.output.formats.is_empty() {
            return Err(Error::invalid("output.formats", "must not be empty"));
        }
        Ok(())
    }

    /// Every resolved input as `section.key = value` pairs, in file units.
    pub fn echo(&self) -> Vec<(String, String)> {
        let a = &self.atomic;
        let p = &self.probe;
        let mut e: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| e.push((k.to_string(), v));
        put(
            "preset",
            self.preset.clone().unwrap_or_else(|| "none".into()),
        );
        put("atomic.gamma_rad_per_s", fmt_f64(a.gamma));
        put("atomic.decay.g13", fmt_f64(a.decay.g13));
        put("atomic.decay.g14", fmt_f64(a.decay.g14));
        put("atomic.decay.g23", fmt_f64(a.decay.g23));
        put("atomic.decay.g24", fmt_f64(a.decay.g24));
        put("atomic.gamma_coll", fmt_f64(a.gamma_coll));
        put(
            "atomic.dephasing_source",
            match a.dephasing_source {
                DephasingSource::Derived => "derived".into(),
                DephasingSource::Explicit => "explicit".into(),
            },
        );
        let d = &a.dephasing;
        for (k, v) in [
            ("r31", d.r31),
            ("r32", d.r32),
            ("r41", d.r41),
            ("r42", d.r42),
            ("r43", d.r43),
            ("r21", d.r21),
        ] {
            put(&format!("atomic.dephasing.{k}"), fmt_f64(v));
        }
        put("atomic.zeeman_excited", fmt_f64(a.zeeman_excited));
        put("atomic.zeeman_ground", fmt_f64(a.zeeman_ground));
        put("atomic.control_detuning", fmt_f64(a.control_detuning));
        put("atomic.probe_detuning", fmt_f64(a.probe_detuning));
        put("atomic.rabi", fmt_f64(a.rabi));
        put("probe.wavelength_nm", fmt_f64(p.lambda * 1e7));
        put("probe.sigma_over_2pi_hz", fmt_f64(p.sigma / (2.0 * PI)));
        put("probe.eps0", fmt_f64(p.eps0));
        put("probe.length_cm", fmt_f64(p.length));
        put("probe.density_per_cm3", fmt_f64(p.density));
        put("probe.n_points", p.grid.n_points.to_string());
        put("probe.span_sigma", fmt_f64(p.grid.span));
        put("probe.dipole", p.dipole.as_str().into());
        put("probe.calibration", fmt_f64(p.calibration));
        put("post_selection.beta", fmt_f64(self.post_selection.beta));
        let m = &self.measurement;
        put(
            "measurement.detector_resolution_us",
            fmt_f64(m.detector_resolution * 1e6),
        );
        put(
            "measurement.absorption_rel_uncertainty",
            fmt_f64(m.absorption_rel_uncertainty),
        );
        put(
            "measurement.calibration_route",
            m.calibration_route.as_str().into(),
        );
        if let Some(s) = &self.sweep {
            put("sweep.variable", s.variable.as_str().into());
            let vals: Vec<String> = s.values.iter().map(|v| fmt_f64(*v)).collect();
            put("sweep.values", format!("[{}]", vals.join(", ")));
        }
        put(
            "output.directory",
            self.output.directory.display().to_string(),
        );
        put(
            "output.figure",
            self.output
                .figure
                .map(|f| f.to_string())
                .unwrap_or_else(|| "none".into()),
        );
        e
    }
}

// ---- file schema -------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    preset: Option<String>,
    atomic: Option<AtomicSection>,
    probe: Option<ProbeSection>,
    post_selection: Option<PostSelectionSection>,
    measurement: Option<MeasurementSection>,
    sweep: Option<SweepSection>,
    output: Option<OutputSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomicSection {
    gamma_rad_per_s: Option<f64>,
    decay: Option<DecayRates>,
    dephasing: Option<Dephasings>,
    gamma_coll: Option<f64>,
    zeeman_excited: Option<f64>,
    zeeman_ground: Option<f64>,
    control_detuning: Option<f64>,
    probe_detuning: Option<f64>,
    rabi: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeSection {
    wavelength_nm: Option<f64>,
    sigma_over_2pi_hz: Option<f64>,
    eps0: Option<f64>,
    length_cm: Option<f64>,
    density_per_cm3: Option<f64>,
    n_points: Option<usize>,
    span_sigma: Option<f64>,
    dipole: Option<DipoleConvention>,
    calibration: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PostSelectionSection {
    beta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasurementSection {
    detector_resolution_us: Option<f64>,
    absorption_rel_uncertainty: Option<f64>,
    calibration_route: Option<CalibrationRoute>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    variable: SweepVariable,
    values: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    directory: Option<PathBuf>,
    formats: Option<Vec<OutputFormat>>,
    figure: Option<u32>,
    gnuplot: Option<bool>,
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Collects required values, remembering which ones are absent.
struct Required {
    missing: Vec<String>,
}

impl Required {
    fn take<T: Copy>(&mut self, name: &str, file: Option<T>, base: Option<T>) -> Option<T> {
        let v = file.or(base);
        if v.is_none() {
            self.missing.push(name.to_string());
        }
        v
    }
}

/// Parses and validates a configuration from TOML text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let file: FileConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let base = match &file.preset {
        Some(name) => Some(RunConfig::preset_by_name(name)?),
        None => None,
    };
    let atomic = file.atomic.unwrap_or_default();
    let probe = file.probe.unwrap_or_default();
    let ps = file.post_selection.unwrap_or_default();
    let meas = file.measurement.unwrap_or_default();
    let out = file.output.unwrap_or_default();
    let ba = base.as_ref().map(|b| &b.atomic);
    let bp = base.as_ref().map(|b| &b.probe);

    let mut req = Required {
        missing: Vec::new(),
    };
    let gamma = req.take(
        "atomic.gamma_rad_per_s",
        atomic.gamma_rad_per_s,
        ba.map(|a| a.gamma),
    );
    let decay = req.take("atomic.decay", atomic.decay, ba.map(|a| a.decay));
    let zeeman_excited = req.take(
        "atomic.zeeman_excited",
        atomic.zeeman_excited,
        ba.map(|a| a.zeeman_excited),
    );
    let zeeman_ground = req.take(
        "atomic.zeeman_ground",
        atomic.zeeman_ground,
        ba.map(|a| a.zeeman_ground),
    );
    let rabi = req.take("atomic.rabi", atomic.rabi, ba.map(|a| a.rabi));
    let wavelength = req.take(
        "probe.wavelength_nm",
        probe.wavelength_nm,
        bp.map(|p| p.lambda * 1e7),
    );
    let sigma_hz = req.take(
        "probe.sigma_over_2pi_hz",
        probe.sigma_over_2pi_hz,
        bp.map(|p| p.sigma / (2.0 * PI)),
    );
    let length = req.take("probe.length_cm", probe.length_cm, bp.map(|p| p.length));
    let density = req.take(
        "probe.density_per_cm3",
        probe.density_per_cm3,
        bp.map(|p| p.density),
    );
    if !req.missing.is_empty() {
        return Err(Error::MissingFields(req.missing));
    }
    let (gamma, decay, zeeman_excited, zeeman_ground, rabi) = (
        gamma.unwrap(),
        decay.unwrap(),
        zeeman_excited.unwrap(),
        zeeman_ground.unwrap(),
        rabi.unwrap(),
    );

    let gamma_coll = atomic
        .gamma_coll
        .or(ba.map(|a| a.gamma_coll))
        .unwrap_or(0.0);
    let control_detuning = atomic
        .control_detuning
        .or(ba.map(|a| a.control_detuning))
        .unwrap_or(0.0);
    // an unset carrier detuning sits on the Raman resonance
    let probe_detuning = atomic
        .probe_detuning
        .or(ba.map(|a| a.probe_detuning))
        .unwrap_or(control_detuning);
    let mut atomic_cfg = AtomicConfig::with_derived_dephasing(
        gamma,
        decay,
        gamma_coll,
        zeeman_excited,
        zeeman_ground,
        control_detuning,
        probe_detuning,
        rabi,
    );
    // explicit rates in the file win; with no file rates and no rate inputs of
    // its own, the preset's explicit rates carry over
    let inherit = atomic.decay.is_none() && atomic.gamma_coll.is_none();
    let explicit = atomic.dephasing.or_else(|| {
        ba.filter(|a| inherit && a.dephasing_source == DephasingSource::Explicit)
            .map(|a| a.dephasing)
    });
    if let Some(d) = explicit {
        atomic_cfg = atomic_cfg.with_dephasings(d);
    }

    let default_grid = bp.map(|p| p.grid).unwrap_or_default();
    let probe_cfg = ProbeConfig {
        lambda: wavelength.unwrap() * 1e-7,
        sigma: 2.0 * PI * sigma_hz.unwrap(),
        eps0: probe.eps0.or(bp.map(|p| p.eps0)).unwrap_or(1.0),
        length: length.unwrap(),
        density: density.unwrap(),
        grid: GridSpec {
            n_points: probe.n_points.unwrap_or(default_grid.n_points),
            span: probe.span_sigma.unwrap_or(default_grid.span),
        },
        dipole: probe
            .dipole
            .or(bp.map(|p| p.dipole))
            .unwrap_or(DipoleConvention::BaseRate),
        calibration: probe
            .calibration
            .or(bp.map(|p| p.calibration))
            .unwrap_or(1.0),
    };

    let base_ps = base.as_ref().map(|b| b.post_selection).unwrap_or_default();
    let base_meas = base.as_ref().map(|b| b.measurement).unwrap_or_default();
    let base_out = base.as_ref().map(|b| b.output.clone()).unwrap_or_default();
    let cfg = RunConfig {
        preset: file.preset.clone(),
        atomic: atomic_cfg,
        probe: probe_cfg,
        post_selection: PostSelection {
            beta: ps.beta.unwrap_or(base_ps.beta),
        },
        measurement: MeasurementSettings {
            detector_resolution: meas
                .detector_resolution_us
                .map(|us| us * 1e-6)
                .unwrap_or(base_meas.detector_resolution),
            absorption_rel_uncertainty: meas
                .absorption_rel_uncertainty
                .unwrap_or(base_meas.absorption_rel_uncertainty),
            calibration_route: meas
                .calibration_route
                .unwrap_or(base_meas.calibration_route),
        },
        sweep: match file.sweep {
            Some(s) => Some(Sweep {
                variable: s.variable,
                values: s.values,
            }),
            None => base.as_ref().and_then(|b| b.sweep.clone()),
        },
        output: OutputSpec {
            directory: out.directory.unwrap_or(base_out.directory),
            formats: out.formats.unwrap_or(base_out.formats),
            figure: out.figure.or(base_out.figure),
            gnuplot: out.gnuplot.unwrap_or(base_out.gnuplot),
        },
    };
    cfg.validate().map_err(|e| match e {
        Error::InvalidConfig { field, reason } => Error::InvalidConfig {
            field: qualify(&field),
            reason,
        },
        other => other,
    })?;
    Ok(cfg)
}

/// Maps a model-level field name onto its configuration key.
fn qualify(field: &str) -> String {
    let key = match field {
        "gamma" => "atomic.gamma_rad_per_s",
        "gamma_13" => "atomic.decay.g13",
        "gamma_14" => "atomic.decay.g14",
        "gamma_23" => "atomic.decay.g23",
        "gamma_24" => "atomic.decay.g24",
        "gamma_coll" => "atomic.gamma_coll",
        "Gamma_31" => "atomic.dephasing.r31",
        "Gamma_32" => "atomic.dephasing.r32",
        "Gamma_41" => "atomic.dephasing.r41",
        "Gamma_42" => "atomic.dephasing.r42",
        "Gamma_43" => "atomic.dephasing.r43",
        "Gamma_21" => "atomic.dephasing.r21",
        "B" => "atomic.zeeman_excited",
        "B_prime" => "atomic.zeeman_ground",
        "Delta" => "atomic.control_detuning",
        "delta0" => "atomic.probe_detuning",
        "G" => "atomic.rabi",
        "lambda" => "probe.wavelength_nm",
        "sigma" => "probe.sigma_over_2pi_hz",
        "length" => "probe.length_cm",
        "density" => "probe.density_per_cm3",
        "eps0" => "probe.eps0",
        "calibration" => "probe.calibration",
        "n_points" => "probe.n_points",
        "span" => "probe.span_sigma",
        "post_selection.beta" => "post_selection.beta",
        other => other,
    };
    key.to_string()
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_lists_required_fields() {
        match parse_config("") {
            Err(Error::MissingFields(f)) => {
                assert!(f.contains(&"atomic.gamma_rad_per_s".to_string()));
                assert!(f.contains(&"probe.density_per_cm3".to_string()));
                assert_eq!(f.len(), 9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn preset_alone_is_the_fig1_block() {
        let cfg = parse_config("preset = \"fig1\"\n").unwrap();
        assert_eq!(cfg, RunConfig::fig1());
    }

    #[test]
    fn explicit_keys_override_a_preset() {
        let cfg = parse_config("preset = \"fig1\"\n[atomic]\nrabi = 0.1\n").unwrap();
        assert_eq!(cfg.atomic.rabi, 0.1);
        assert_eq!(cfg.atomic.dephasing, AtomicConfig::fig1().dephasing);
    }

    #[test]
    fn unknown_key_reports_its_position() {
        let err = parse_config("preset = \"fig1\"\n[probe]\nwavelength = 770\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (3, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_gamma_is_named() {
        let err =
            parse_config("preset = \"fig1\"\n[atomic]\ngamma_rad_per_s = -1.0\n").unwrap_err();
        match err {
            Error::InvalidConfig { field, .. } => assert_eq!(field, "atomic.gamma_rad_per_s"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_sweep_is_rejected() {
        let err = parse_config("preset = \"fig1\"\n[sweep]\nvariable = \"G\"\nvalues = []\n")
            .unwrap_err();
        assert!(matches!(err, Error::InvalidConfig { ref field, .. } if field == "sweep.values"));
    }

    #[test]
    fn echo_is_complete() {
        let echo = RunConfig::preset(5).unwrap().echo();
        let keys: Vec<&str> = echo.iter().map(|(k, _)| k.as_str()).collect();
        for k in [
            "atomic.rabi",
            "probe.calibration",
            "probe.n_points",
            "sweep.values",
            "post_selection.beta",
        ] {
            assert!(keys.contains(&k), "{k}");
        }
    }

    #[test]
    fn fig1_pulse_duration() {
        let cfg = RunConfig::fig1();
        assert!((cfg.probe.sigma_t() - 400e-6).abs() < 5e-6);
        assert_eq!(cfg.post_selection.beta, 0.1);
    }
}
