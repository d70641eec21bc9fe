//! Gaussian probe spectrum and spectral-domain propagation through the medium.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::envelope::{Component, FieldEnvelope};
use super::probe::ProbeConfig;
use crate::atomic_response::SusceptibilityCurve;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

/// Fraction of the window, at each end, that must stay (almost) empty.
pub const EDGE_FRACTION: f64 = 0.05;
/// Largest tolerated energy fraction inside the edge regions.
pub const EDGE_ENERGY_LIMIT: f64 = 1e-6;

/// Total-field spectrum ε(ω) on the offset grid (offsets and ε in γ units).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
}

impl Spectrum {
    /// Amplitude of each circular component, ε±(ω) = ε(ω)/√2.
    pub fn component(&self) -> Vec<Complex64> {
        self.values.iter().map(|v| v * FRAC_1_SQRT_2).collect()
    }

    /// ∫|ε(ω)|² dω by the trapezoidal rule.
    pub fn energy(&self) -> f64 {
        crate::grid::trapezoid(self.values.iter().map(|v| v.norm_sqr()), self.grid.step)
    }
}

/// ε(ω) = ε0 exp(−ω²/σ²)/(σ√π), sampled on the grid implied by `probe`.
pub fn gaussian_spectrum(probe: &ProbeConfig, gamma: f64) -> Result<Spectrum> {
    let grid = FrequencyGrid::for_probe(probe, gamma)?;
    let sigma = probe.sigma_scaled(gamma);
    let norm = probe.eps0 / (sigma * PI.sqrt());
    let values = grid
        .offsets()
        .into_iter()
        .map(|w| Complex64::new(norm * (-(w / sigma).powi(2)).exp(), 0.0))
        .collect();
    Ok(Spectrum { grid, values })
}

/// Inverse transform E(τ_m) = Σ_k s_k exp(−iω_k τ_m) dω on the conjugate time grid.
pub struct Synthesizer {
    grid: FrequencyGrid,
    fft: Arc<dyn Fft<f64>>,
}

impl Synthesizer {
    pub fn new(grid: FrequencyGrid) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(grid.n_points);
        Synthesizer { grid, fft }
    }

    pub fn envelope(&self, spectrum: &[Complex64], component: Component) -> Result<FieldEnvelope> {
        let n = self.grid.n_points;
        if spectrum.len() != n {
            return Err(Error::GridMismatch);
        }
        // n is a multiple of 4, so the centring phases reduce to (−1)^k and (−1)^m
        let mut buf: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(k, s)| if k % 2 == 0 { *s } else { -*s })
            .collect();
        self.fft.process(&mut buf);
        let dw = self.grid.step;
        for (m, v) in buf.iter_mut().enumerate() {
            *v *= if m % 2 == 0 { dw } else { -dw };
        }
        let env = FieldEnvelope::new(self.grid.time_grid(), buf, component);
        check_aliasing(&env)?;
        Ok(env)
    }
}

/// Rejects envelopes whose energy reaches into the outer window edges.
pub fn check_aliasing(env: &FieldEnvelope) -> Result<()> {
    let n = env.values.len();
    let edge = ((n as f64) * EDGE_FRACTION).ceil() as usize;
    let total: f64 = env.values.iter().map(|v| v.norm_sqr()).sum();
    if total == 0.0 {
        return Ok(());
    }
    let near: f64 = env.values[..edge]
        .iter()
        .chain(&env.values[n - edge..])
        .map(|v| v.norm_sqr())
        .sum();
    let fraction = near / total;
    if fraction > EDGE_ENERGY_LIMIT {
        return Err(Error::Aliasing { fraction });
    }
    Ok(())
}

/// The input pulse as it would arrive after vacuum propagation.
pub fn input_envelope(spectrum: &Spectrum) -> Result<FieldEnvelope> {
    Synthesizer::new(spectrum.grid).envelope(&spectrum.values, Component::Input)
}

/// Output σ± envelopes
/// E±(τ) = ∫dω ε±(ω) exp{−iωτ + 2πi(ω0 + ω)(L/c)χ±(ω)}, τ = t − L/c.
pub fn propagate(
    spectrum: &Spectrum,
    curve: &SusceptibilityCurve,
    probe: &ProbeConfig,
) -> Result<(FieldEnvelope, FieldEnvelope)> {
    let n = spectrum.grid.n_points;
    if curve.len() != n
        || (curve.step() - spectrum.grid.step).abs() > 1e-12 * spectrum.grid.step
        || (curve.omega_offsets[0] - spectrum.grid.offset(0)).abs() > 1e-9 * spectrum.grid.step
    {
        return Err(Error::GridMismatch);
    }
    let w0 = probe.carrier_scaled(curve.gamma);
    let transit = probe.transit_scaled(curve.gamma);
    let amplitude = spectrum.component();
    let dress = |chi: &[Complex64]| -> Vec<Complex64> {
        amplitude
            .iter()
            .zip(chi)
            .zip(&curve.omega_offsets)
            .map(|((a, c), w)| a * (Complex64::i() * (2.0 * PI * (w0 + w) * transit) * c).exp())
            .collect()
    };
    let synth = Synthesizer::new(spectrum.grid);
    let plus = synth.envelope(&dress(&curve.chi_plus), Component::SigmaPlus)?;
    let minus = synth.envelope(&dress(&curve.chi_minus), Component::SigmaMinus)?;
    Ok((plus, minus))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA: f64 = 6.366e6;

    #[test]
    fn spectrum_peak_value() {
        let mut probe = ProbeConfig::fig1();
        probe.eps0 = 2.5;
        let s = gaussian_spectrum(&probe, GAMMA).unwrap();
        let centre = s.values[s.grid.n_points / 2];
        let sigma = probe.sigma_scaled(GAMMA);
        assert!((centre.re - 2.5 / (sigma * PI.sqrt())).abs() < 1e-12 * centre.re);
        assert_eq!(s.grid.offset(s.grid.n_points / 2), 0.0);
    }

    #[test]
    fn input_envelope_peaks_at_eps0() {
        let probe = ProbeConfig::fig1();
        let s = gaussian_spectrum(&probe, GAMMA).unwrap();
        let e = input_envelope(&s).unwrap();
        let c = e.values[e.values.len() / 2];
        assert!((c.re - 1.0).abs() < 1e-12, "{c}");
        assert!(c.im.abs() < 1e-12);
    }

    #[test]
    fn narrow_window_is_flagged_as_aliasing() {
        let mut probe = ProbeConfig::fig1();
        // dt = 2π/(span σ); a huge span squeezes the window below the pulse width
        probe.grid.span = 4.0e4;
        let s = gaussian_spectrum(&probe, GAMMA).unwrap();
        assert!(matches!(input_envelope(&s), Err(Error::Aliasing { .. })));
    }
}
