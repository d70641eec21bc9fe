//! Parameters of the driven four-level medium.
//!
//! Levels |1⟩, |2⟩ are the Zeeman-split ground states and |3⟩, |4⟩ the
//! excited states. The σ− probe drives |1⟩↔|4⟩, the σ+ probe |2⟩↔|3⟩ and the
//! π-polarized control field drives |1⟩↔|3⟩ and |2⟩↔|4⟩ with half-Rabi
//! frequency `rabi`. Apart from `gamma` itself, every rate and frequency is
//! expressed in units of `gamma`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spontaneous emission rates γ_ij, population flowing from |j⟩ to |i⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayRates {
    pub g13: f64,
    pub g14: f64,
    pub g23: f64,
    pub g24: f64,
}

impl DecayRates {
    /// Total decay out of |3⟩.
    pub fn out_of_3(&self) -> f64 {
        self.g13 + self.g23
    }

    /// Total decay out of |4⟩.
    pub fn out_of_4(&self) -> f64 {
        self.g14 + self.g24
    }
}

/// Coherence dephasing rates Γ_ij.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dephasings {
    pub r31: f64,
    pub r32: f64,
    pub r41: f64,
    pub r42: f64,
    pub r43: f64,
    pub r21: f64,
}

impl Dephasings {
    /// Γ_ij = ½ Σ_k (γ_ki + γ_kj) + γ_coll. Ground states do not decay.
    pub fn from_channels(decay: &DecayRates, gamma_coll: f64) -> Self {
        let half3 = 0.5 * decay.out_of_3();
        let half4 = 0.5 * decay.out_of_4();
        Dephasings {
            r31: half3 + gamma_coll,
            r32: half3 + gamma_coll,
            r41: half4 + gamma_coll,
            r42: half4 + gamma_coll,
            r43: half3 + half4 + gamma_coll,
            r21: gamma_coll,
        }
    }

    fn as_array(&self) -> [(&'static str, f64); 6] {
        [
            ("Gamma_31", self.r31),
            ("Gamma_32", self.r32),
            ("Gamma_41", self.r41),
            ("Gamma_42", self.r42),
            ("Gamma_43", self.r43),
            ("Gamma_21", self.r21),
        ]
    }

    /// Largest absolute difference to another set of rates.
    pub fn max_abs_diff(&self, other: &Dephasings) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array().iter())
            .map(|(a, b)| (a.1 - b.1).abs())
            .fold(0.0, f64::max)
    }
}

/// Whether the dephasing rates were derived from the channel rates or given explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DephasingSource {
    Derived,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicConfig {
    /// Base spontaneous rate γ in rad/s.
    pub gamma: f64,
    pub decay: DecayRates,
    pub dephasing: Dephasings,
    pub dephasing_source: DephasingSource,
    pub gamma_coll: f64,
    /// Excited-state Zeeman half-splitting B.
    pub zeeman_excited: f64,
    /// Ground-state Zeeman half-splitting B′.
    pub zeeman_ground: f64,
    /// Control detuning Δ = ω_c − ω_42.
    pub control_detuning: f64,
    /// Probe carrier detuning δ = ω_p − ω_41.
    pub probe_detuning: f64,
    /// Control half-Rabi frequency G.
    pub rabi: f64,
}

impl AtomicConfig {
    /// Builds a configuration whose dephasings follow from the decay channels.
    #[allow(clippy::too_many_arguments)]
    pub fn with_derived_dephasing(
        gamma: f64,
        decay: DecayRates,
        gamma_coll: f64,
        zeeman_excited: f64,
        zeeman_ground: f64,
        control_detuning: f64,
        probe_detuning: f64,
        rabi: f64,
    ) -> Self {
        AtomicConfig {
            gamma,
            decay,
            dephasing: Dephasings::from_channels(&decay, gamma_coll),
            dephasing_source: DephasingSource::Derived,
            gamma_coll,
            zeeman_excited,
            zeeman_ground,
            control_detuning,
            probe_detuning,
            rabi,
        }
    }

    /// Replaces the dephasing rates with explicit values.
    pub fn with_dephasings(mut self, dephasing: Dephasings) -> Self {
        self.dephasing = dephasing;
        self.dephasing_source = DephasingSource::Explicit;
        self
    }

    /// ³⁹K D1 medium: A = 2π × 6.079 MHz, γ = A/6, B = 5γ, B′ = 3B, G = 0.03γ.
    ///
    /// The probe carrier sits on the Raman (two-photon) resonance, δ = Δ.
    pub fn fig1() -> Self {
        let a = 2.0 * std::f64::consts::PI * 6.079e6;
        let decay = DecayRates {
            g13: 1.0,
            g14: 2.0,
            g23: 2.0,
            g24: 1.0,
        };
        let b = 5.0;
        let cfg =
            AtomicConfig::with_derived_dephasing(a / 6.0, decay, 0.0, b, 3.0 * b, 0.0, 0.0, 0.03);
        cfg.with_dephasings(Dephasings {
            r31: 1.5,
            r32: 1.5,
            r41: 1.5,
            r42: 1.5,
            r43: 3.0,
            r21: 0.0,
        })
    }

    /// Probe carrier detuning that puts the pulse centre on the Raman resonance
    /// of the |1⟩–|2⟩ coherence (ω_pc = −2B′, i.e. δ = Δ).
    pub fn raman_resonant_detuning(&self) -> f64 {
        self.control_detuning
    }

    /// Probe–pump detuning ω_pc = δ − Δ − 2B′ for a probe at `offset` from the carrier.
    pub fn omega_pc(&self, offset: f64) -> f64 {
        self.probe_detuning + offset - self.control_detuning - 2.0 * self.zeeman_ground
    }

    /// `true` when explicit dephasings deviate from the channel-derived values.
    pub fn dephasing_is_inconsistent(&self) -> bool {
        let derived = Dephasings::from_channels(&self.decay, self.gamma_coll);
        self.dephasing.max_abs_diff(&derived) > 1e-12
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::invalid("gamma", "must be finite and > 0"));
        }
        let rates = [
            ("gamma_13", self.decay.g13),
            ("gamma_14", self.decay.g14),
            ("gamma_23", self.decay.g23),
            ("gamma_24", self.decay.g24),
            ("gamma_coll", self.gamma_coll),
        ];
        for (name, v) in rates.iter().chain(self.dephasing.as_array().iter()) {
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::invalid(*name, "rates must be finite and >= 0"));
            }
        }
        let freqs = [
            ("B", self.zeeman_excited),
            ("B_prime", self.zeeman_ground),
            ("Delta", self.control_detuning),
            ("delta0", self.probe_detuning),
            ("G", self.rabi),
        ];
        for (name, v) in freqs {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_explicit_dephasings_match_channel_formula() {
        let cfg = AtomicConfig::fig1();
        assert_eq!(cfg.dephasing_source, DephasingSource::Explicit);
        assert!(!cfg.dephasing_is_inconsistent());
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn negative_rate_is_rejected_by_name() {
        let mut cfg = AtomicConfig::fig1();
        cfg.decay.g23 = -1.0;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("gamma_23"), "{err}");
    }

    #[test]
    fn omega_pc_is_raman_detuning_at_the_default_carrier() {
        let cfg = AtomicConfig::fig1();
        assert_eq!(cfg.omega_pc(0.0), -30.0);
        assert_eq!(cfg.omega_pc(0.25), -29.75);
    }
}
