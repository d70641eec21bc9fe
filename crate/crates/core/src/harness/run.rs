use std::io::Write;

use rayon::prelude::*;

use super::config::{CalibrationRoute, RunConfig, Sweep, SweepVariable, CALIBRATION_TARGET_DGD};
use crate::atomic_response::{
    analytic_dgd, carrier_phase, AtomicConfig, AtomicSusceptibility, SusceptibilityCurve,
};
use crate::error::{Error, Result};
use crate::estimation::estimate_density;
use crate::format::fmt_f64;
use crate::grid::FrequencyGrid;
use crate::pulse_engine::{
    gaussian_spectrum, input_envelope, measured_dgd, peak_time, propagate, FieldEnvelope,
    ProbeConfig,
};
use crate::weak_measurement::{
    amplitude_ratio, infer_dgd, mean_arrival, peak_amplitude_ratio, postselect,
    weak_value_absorptive, InferenceMode, MeasurementReport, PhaseModel, PostSelection,
    ResolutionFlags,
};

/// Environment variable capping the number of sweep worker threads.
pub const THREADS_ENV: &str = "WEAKDGD_THREADS";

/// Input, σ± and post-selected envelopes of one operating point.
#[derive(Debug, Clone)]
pub struct PointFields {
    pub input: FieldEnvelope,
    pub plus: FieldEnvelope,
    pub minus: FieldEnvelope,
    pub output: FieldEnvelope,
}

/// Propagates the probe and applies the post-selection.
pub fn simulate_fields(
    atomic: &AtomicConfig,
    probe: &ProbeConfig,
    ps: &PostSelection,
) -> Result<PointFields> {
    atomic.validate()?;
    let grid = FrequencyGrid::for_probe(probe, atomic.gamma)?;
    let spectrum = gaussian_spectrum(probe, atomic.gamma)?;
    let model = AtomicSusceptibility::new(atomic, probe)?;
    let curve = SusceptibilityCurve::sample(&model, &grid, atomic.gamma, model.prefactors())?;
    let (plus, minus) = propagate(&spectrum, &curve, probe)?;
    let output = postselect(&plus, &minus, ps)?;
    Ok(PointFields {
        input: input_envelope(&spectrum)?,
        plus,
        minus,
        output,
    })
}

/// Runs the full measurement chain at the configuration's base point.
pub fn simulate_point(cfg: &RunConfig) -> Result<MeasurementReport> {
    let (atomic, probe, ps) = (&cfg.atomic, &cfg.probe, &cfg.post_selection);
    let f = simulate_fields(atomic, probe, ps)?;
    let gamma = atomic.gamma;
    let dgd_measured = measured_dgd(&f.plus, &f.minus)?;
    let dgd_analytic = analytic_dgd(atomic, probe).ok();
    let input_energy = f.input.energy();
    let mean = mean_arrival(&f.output.grid, &f.output.intensity(), input_energy)?;
    let (t_plus, t_minus) = (peak_time(&f.plus)?, peak_time(&f.minus)?);
    let eta = amplitude_ratio(&f.plus, &f.minus)?;
    let model = AtomicSusceptibility::new(atomic, probe)?;
    let phi = carrier_phase(&model, probe, gamma)?;
    let density = estimate_density(dgd_measured.max(0.0), atomic, probe)
        .and_then(|d| {
            d.with_absorption_model(atomic, probe, cfg.measurement.absorption_rel_uncertainty)
        })
        .ok();
    Ok(MeasurementReport {
        mean_arrival: mean,
        mean_shift: mean - 0.5 * (t_plus + t_minus),
        output_peak_shift: peak_time(&f.output)? - peak_time(&f.input)?,
        dgd_analytic,
        dgd_measured,
        dgd_inferred: infer_dgd(mean.abs(), ps, InferenceMode::Linear)?,
        dgd_inferred_phase_aware: infer_dgd(
            mean.abs(),
            ps,
            InferenceMode::PhaseAware(PhaseModel::Fixed(phi)),
        )
        .ok(),
        weak_value_re: weak_value_absorptive(ps, phi, eta)?,
        eta,
        eta_peak: peak_amplitude_ratio(&f.plus, &f.minus)?,
        energy_fraction: f.output.energy() / input_energy,
        peak_ratio: f.output.peak_intensity() / f.input.peak_intensity(),
        phase_phi: phi,
        calibration: probe.calibration,
        flags: ResolutionFlags::new(
            cfg.measurement.detector_resolution * gamma,
            dgd_measured,
            mean,
        ),
        density,
        config_echo: cfg.echo(),
    })
}

/// Delay used to fit the calibration scalar.
fn calibration_dgd(
    atomic: &AtomicConfig,
    probe: &ProbeConfig,
    route: CalibrationRoute,
) -> Result<f64> {
    match route {
        CalibrationRoute::Analytic => analytic_dgd(atomic, probe),
        CalibrationRoute::Measured => {
            let f = simulate_fields(atomic, probe, &PostSelection::default())?;
            measured_dgd(&f.plus, &f.minus)
        }
    }
}

/// Scalar multiplying the susceptibility prefactors such that the Fig. 1
/// medium (with `probe`'s dipole convention and grid) yields a delay of
/// [`CALIBRATION_TARGET_DGD`].
pub fn calibrate(probe: &ProbeConfig, route: CalibrationRoute) -> Result<f64> {
    let atomic = AtomicConfig::fig1();
    let mut p = ProbeConfig::fig1();
    p.dipole = probe.dipole;
    p.grid = probe.grid;
    let g = |c: f64| -> Result<f64> {
        let mut q = p.clone();
        q.calibration = c;
        Ok(calibration_dgd(&atomic, &q, route)? - CALIBRATION_TARGET_DGD)
    };
    let (mut lo, mut hi) = (0.5, 2.0);
    for _ in 0..30 {
        if g(lo)? < 0.0 {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..30 {
        if g(hi)? > 0.0 {
            break;
        }
        hi *= 2.0;
    }
    if !(g(lo)? < 0.0 && g(hi)? > 0.0) {
        return Err(Error::NoSolution(
            "calibration scalar could not be bracketed".into(),
        ));
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Configuration of a single sweep point, with the sweep itself removed.
pub fn apply_sweep_value(cfg: &RunConfig, variable: SweepVariable, value: f64) -> RunConfig {
    let mut c = cfg.clone();
    c.sweep = None;
    match variable {
        SweepVariable::G => c.atomic.rabi = value,
        SweepVariable::Beta => c.post_selection.beta = value,
        SweepVariable::Sigma => c.probe.sigma = 2.0 * std::f64::consts::PI * value,
        SweepVariable::N => c.probe.density = value,
    }
    c
}

#[derive(Debug)]
pub struct SweepRow {
    pub value: f64,
    pub result: Result<MeasurementReport>,
}

#[derive(Debug)]
pub struct SweepTable {
    pub variable: SweepVariable,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Reports of the rows that succeeded, with their sweep values.
    pub fn successes(&self) -> impl Iterator<Item = (f64, &MeasurementReport)> {
        self.rows
            .iter()
            .filter_map(|r| r.result.as_ref().ok().map(|m| (r.value, m)))
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Evaluates every sweep value concurrently; rows keep the input order and a
/// failing point is recorded in its row without aborting the sweep.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let sweep = cfg.sweep.clone().unwrap_or(Sweep {
        variable: SweepVariable::G,
        values: vec![cfg.atomic.rabi],
    });
    let eval = || -> Vec<SweepRow> {
        sweep
            .values
            .par_iter()
            .map(|&v| SweepRow {
                value: v,
                result: simulate_point(&apply_sweep_value(cfg, sweep.variable, v)),
            })
            .collect()
    };
    let rows = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(eval),
        None => eval(),
    };
    Ok(SweepTable {
        variable: sweep.variable,
        rows,
    })
}

/// `# key = value` provenance lines shared by every output file.
pub fn provenance_header(cfg: &RunConfig) -> Vec<String> {
    let g = FrequencyGrid::for_probe(&cfg.probe, cfg.atomic.gamma).ok();
    let mut lines = vec![
        "# units: times in 1/gamma, atomic frequencies and rates in gamma, phases in rad"
            .to_string(),
        format!("# calibration = {}", fmt_f64(cfg.probe.calibration)),
        format!(
            "# grid: n_points = {}, span_sigma = {}, d_omega_over_gamma = {}, dt_gamma = {}",
            cfg.probe.grid.n_points,
            fmt_f64(cfg.probe.grid.span),
            g.map(|g| fmt_f64(g.step)).unwrap_or_default(),
            g.map(|g| fmt_f64(g.time_grid().step)).unwrap_or_default(),
        ),
    ];
    lines.extend(cfg.echo().into_iter().map(|(k, v)| format!("# {k} = {v}")));
    lines
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes a sweep table as CSV: provenance header, then one row per point.
pub fn write_sweep_csv<W: Write>(
    cfg: &RunConfig,
    table: &SweepTable,
    mut out: W,
) -> std::io::Result<()> {
    for line in provenance_header(cfg) {
        writeln!(out, "{line}")?;
    }
    let mut header = vec![table.variable.column()];
    header.extend(MeasurementReport::COLUMNS);
    header.push("error");
    writeln!(out, "{}", header.join(","))?;
    let blanks = vec![String::new(); MeasurementReport::COLUMNS.len()];
    for row in &table.rows {
        let (values, err) = match &row.result {
            Ok(r) => (r.values(), String::new()),
            Err(e) => (blanks.clone(), csv_field(&format!("{}: {e}", e.kind()))),
        };
        writeln!(out, "{},{},{}", fmt_f64(row.value), values.join(","), err)?;
    }
    Ok(())
}

/// Least-squares slope and intercept of y on x.
pub fn regression(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regression_of_a_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let (s, b) = regression(&x, &y).unwrap();
        assert!((s - 3.0).abs() < 1e-14 && (b + 1.0).abs() < 1e-14);
        assert!(regression(&[1.0], &[2.0]).is_none());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn sweep_values_land_in_the_right_field() {
        let cfg = RunConfig::fig1();
        assert_eq!(
            apply_sweep_value(&cfg, SweepVariable::G, 0.2).atomic.rabi,
            0.2
        );
        assert_eq!(
            apply_sweep_value(&cfg, SweepVariable::Beta, 0.3)
                .post_selection
                .beta,
            0.3
        );
        assert_eq!(
            apply_sweep_value(&cfg, SweepVariable::N, 5e8).probe.density,
            5e8
        );
    }
}
