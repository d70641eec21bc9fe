use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{carrier_angular_frequency, SPEED_OF_LIGHT};

/// How the dipole moments |d41|², |d32|² are fixed.
///
/// Both variants use |d|² = 3ħc³γ_ch/(4ω0³). `BaseRate` takes γ_ch = γ for
/// both transitions, `ChannelRate` takes γ_ch = γ14 for σ− and γ23 for σ+.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DipoleConvention {
    BaseRate,
    ChannelRate,
}

impl DipoleConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            DipoleConvention::BaseRate => "base-rate",
            DipoleConvention::ChannelRate => "channel-rate",
        }
    }
}

/// Simulation frequency grid: `n_points` samples spanning `span` multiples of σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_points: usize,
    pub span: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_points: 8192,
            span: 128.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Carrier wavelength in cm.
    pub lambda: f64,
    /// Spectral half-width σ in rad/s, ε(ω) ∝ exp(−ω²/σ²).
    pub sigma: f64,
    /// Field amplitude ε0, arbitrary units. Inert in linear response.
    pub eps0: f64,
    /// Medium length in cm.
    pub length: f64,
    /// Number density in cm⁻³.
    pub density: f64,
    pub grid: GridSpec,
    pub dipole: DipoleConvention,
    /// Scalar multiplying both susceptibility prefactors.
    pub calibration: f64,
}

impl ProbeConfig {
    /// N = 10⁹ cm⁻³, L = 1 cm, λ = 769.9 nm, σ = 2π × 0.7916 kHz.
    pub fn fig1() -> Self {
        ProbeConfig {
            lambda: 769.9e-7,
            sigma: 2.0 * PI * 791.6,
            eps0: 1.0,
            length: 1.0,
            density: 1e9,
            grid: GridSpec::default(),
            dipole: DipoleConvention::BaseRate,
            calibration: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda", self.lambda),
            ("sigma", self.sigma),
            ("length", self.length),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, "must be finite and > 0"));
            }
        }
        if !(self.density.is_finite() && self.density >= 0.0) {
            return Err(Error::invalid("density", "must be finite and >= 0"));
        }
        if !self.eps0.is_finite() {
            return Err(Error::invalid("eps0", "must be finite"));
        }
        if !(self.calibration.is_finite() && self.calibration > 0.0) {
            return Err(Error::invalid("calibration", "must be finite and > 0"));
        }
        let n = self.grid.n_points;
        if n < 4096 || !n.is_power_of_two() {
            return Err(Error::invalid("n_points", "must be a power of two >= 4096"));
        }
        if !(self.grid.span.is_finite() && self.grid.span >= 16.0) {
            return Err(Error::invalid("span", "must be >= 16 (units of sigma)"));
        }
        Ok(())
    }

    pub fn carrier(&self) -> f64 {
        carrier_angular_frequency(self.lambda)
    }

    /// ω0/γ.
    pub fn carrier_scaled(&self, gamma: f64) -> f64 {
        self.carrier() / gamma
    }

    /// Vacuum transit time L/c in units of 1/γ.
    pub fn transit_scaled(&self, gamma: f64) -> f64 {
        self.length / SPEED_OF_LIGHT * gamma
    }

    /// σ/γ.
    pub fn sigma_scaled(&self, gamma: f64) -> f64 {
        self.sigma / gamma
    }

    /// Temporal 1/e half-width of the field envelope, σ_t = 2/σ, in seconds.
    pub fn sigma_t(&self) -> f64 {
        2.0 / self.sigma
    }
}
