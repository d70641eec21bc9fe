//! Susceptibilities χ± of the medium, group indices and the analytic
//! differential group delay.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::config::AtomicConfig;
use super::steady_state::{probe_coherences_with, zeroth_order, ZerothOrderState};
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::pulse_engine::{DipoleConvention, ProbeConfig};

/// Anything that yields (χ+, χ−) at a frequency offset (units of γ) from the carrier.
pub trait SusceptibilityModel: Sync {
    fn chi(&self, offset: f64) -> Result<(Complex64, Complex64)>;
}

/// Conversion factors C± = N|d|²/(ħγ), including the calibration scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prefactors {
    pub plus: f64,
    pub minus: f64,
}

impl Prefactors {
    pub fn new(cfg: &AtomicConfig, probe: &ProbeConfig) -> Self {
        // 3c³/(4ω0³) = (3/4)(λ/2π)³
        let reduced = probe.lambda / (2.0 * PI);
        let base = 0.75 * reduced.powi(3) * probe.density * probe.calibration;
        let (plus, minus) = match probe.dipole {
            DipoleConvention::BaseRate => (1.0, 1.0),
            DipoleConvention::ChannelRate => (cfg.decay.g23, cfg.decay.g14),
        };
        Prefactors {
            plus: base * plus,
            minus: base * minus,
        }
    }
}

/// χ± of the driven four-level medium.
#[derive(Debug, Clone)]
pub struct AtomicSusceptibility {
    cfg: AtomicConfig,
    state: ZerothOrderState,
    prefactors: Prefactors,
}

impl AtomicSusceptibility {
    pub fn new(cfg: &AtomicConfig, probe: &ProbeConfig) -> Result<Self> {
        probe.validate()?;
        let state = zeroth_order(cfg)?;
        Ok(AtomicSusceptibility {
            cfg: cfg.clone(),
            state,
            prefactors: Prefactors::new(cfg, probe),
        })
    }

    pub fn prefactors(&self) -> Prefactors {
        self.prefactors
    }

    pub fn atomic(&self) -> &AtomicConfig {
        &self.cfg
    }

    pub fn state(&self) -> &ZerothOrderState {
        &self.state
    }
}

impl SusceptibilityModel for AtomicSusceptibility {
    fn chi(&self, offset: f64) -> Result<(Complex64, Complex64)> {
        let pc = probe_coherences_with(&self.cfg, &self.state, self.cfg.omega_pc(offset))?;
        Ok((
            pc.rho32_plus * self.prefactors.plus,
            pc.rho41_minus * self.prefactors.minus,
        ))
    }
}

/// Frequency-independent susceptibilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSusceptibility {
    pub plus: Complex64,
    pub minus: Complex64,
}

impl SusceptibilityModel for ConstantSusceptibility {
    fn chi(&self, _offset: f64) -> Result<(Complex64, Complex64)> {
        Ok((self.plus, self.minus))
    }
}

impl<F> SusceptibilityModel for F
where
    F: Fn(f64) -> (Complex64, Complex64) + Sync,
{
    fn chi(&self, offset: f64) -> Result<(Complex64, Complex64)> {
        Ok(self(offset))
    }
}

/// χ± sampled on a uniform offset grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityCurve {
    pub omega_offsets: Vec<f64>,
    pub chi_plus: Vec<Complex64>,
    pub chi_minus: Vec<Complex64>,
    pub prefactor_plus: f64,
    pub prefactor_minus: f64,
    /// γ in rad/s; the offsets are in units of it.
    pub gamma: f64,
}

impl SusceptibilityCurve {
    pub fn sample(
        model: &dyn SusceptibilityModel,
        grid: &FrequencyGrid,
        gamma: f64,
        prefactors: Prefactors,
    ) -> Result<Self> {
        let omega_offsets = grid.offsets();
        let mut chi_plus = Vec::with_capacity(grid.n_points);
        let mut chi_minus = Vec::with_capacity(grid.n_points);
        for &w in &omega_offsets {
            let (p, m) = model.chi(w)?;
            chi_plus.push(p);
            chi_minus.push(m);
        }
        Ok(SusceptibilityCurve {
            omega_offsets,
            chi_plus,
            chi_minus,
            prefactor_plus: prefactors.plus,
            prefactor_minus: prefactors.minus,
            gamma,
        })
    }

    pub fn len(&self) -> usize {
        self.omega_offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_offsets.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.omega_offsets[1] - self.omega_offsets[0]
    }
}

/// Samples χ± of the atomic medium on `grid`.
pub fn susceptibility_curve(
    cfg: &AtomicConfig,
    probe: &ProbeConfig,
    grid: &FrequencyGrid,
) -> Result<SusceptibilityCurve> {
    let model = AtomicSusceptibility::new(cfg, probe)?;
    SusceptibilityCurve::sample(&model, grid, cfg.gamma, model.prefactors())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupIndices {
    pub plus: f64,
    pub minus: f64,
}

impl GroupIndices {
    /// v_g± = c/n_g± in cm/s.
    pub fn velocities(&self) -> (f64, f64) {
        let c = crate::units::SPEED_OF_LIGHT;
        (c / self.plus, c / self.minus)
    }
}

/// Relative disagreement allowed between the h and h/2 derivative stencils.
pub const STENCIL_TOLERANCE: f64 = 1e-3;

/// Derivative step min(σ/100, 10⁻³γ), in units of γ.
pub fn derivative_step(probe: &ProbeConfig, gamma: f64) -> f64 {
    (probe.sigma_scaled(gamma) / 100.0).min(1e-3)
}

fn re_derivative(model: &dyn SusceptibilityModel, h: f64) -> Result<(f64, f64)> {
    let (p1, m1) = model.chi(h)?;
    let (p0, m0) = model.chi(-h)?;
    Ok(((p1.re - p0.re) / (2.0 * h), (m1.re - m0.re) / (2.0 * h)))
}

fn check_stencils(coarse: f64, fine: f64) -> Result<f64> {
    let scale = coarse.abs().max(fine.abs());
    let rel = if scale == 0.0 {
        0.0
    } else {
        (coarse - fine).abs() / scale
    };
    if rel > STENCIL_TOLERANCE {
        return Err(Error::GridTooCoarse { rel_diff: rel });
    }
    // Richardson extrapolation of the two central differences
    Ok((4.0 * fine - coarse) / 3.0)
}

/// n_g± = 1 + 2π Re χ±(0) + 2π ω0 ∂ω Re χ±|₀.
pub fn group_indices(
    model: &dyn SusceptibilityModel,
    probe: &ProbeConfig,
    gamma: f64,
) -> Result<GroupIndices> {
    let h = derivative_step(probe, gamma);
    let (dp_h, dm_h) = re_derivative(model, h)?;
    let (dp_h2, dm_h2) = re_derivative(model, 0.5 * h)?;
    let dp = check_stencils(dp_h, dp_h2)?;
    let dm = check_stencils(dm_h, dm_h2)?;
    let (p0, m0) = model.chi(0.0)?;
    let w0 = probe.carrier_scaled(gamma);
    Ok(GroupIndices {
        plus: 1.0 + 2.0 * PI * p0.re + 2.0 * PI * w0 * dp,
        minus: 1.0 + 2.0 * PI * m0.re + 2.0 * PI * w0 * dm,
    })
}

/// δτ = (L/c)(n_g− − n_g+) in units of 1/γ.
pub fn analytic_dgd(cfg: &AtomicConfig, probe: &ProbeConfig) -> Result<f64> {
    let model = AtomicSusceptibility::new(cfg, probe)?;
    let ng = group_indices(&model, probe, cfg.gamma)?;
    Ok(probe.transit_scaled(cfg.gamma) * (ng.minus - ng.plus))
}

/// Carrier phase difference φ = 2π (ω0 L/c)(Re χ+(0) − Re χ−(0)), wrapped to (−π, π].
pub fn carrier_phase(
    model: &dyn SusceptibilityModel,
    probe: &ProbeConfig,
    gamma: f64,
) -> Result<f64> {
    let (p0, m0) = model.chi(0.0)?;
    let raw =
        2.0 * PI * probe.carrier_scaled(gamma) * probe.transit_scaled(gamma) * (p0.re - m0.re);
    Ok(wrap_phase(raw))
}

pub fn wrap_phase(phi: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut w = phi.rem_euclid(two_pi);
    if w > PI {
        w -= two_pi;
    }
    w
}
