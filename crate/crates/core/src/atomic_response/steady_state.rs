//! Closed-form steady state of the control-driven system and its linear
//! response to the σ± probe components.

use num_complex::Complex64;

use super::config::AtomicConfig;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Probe-free steady state. Populations are real, ρ13 and ρ24 are the
/// control-induced coherences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZerothOrderState {
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub rho44: f64,
    pub rho13: Complex64,
    pub rho24: Complex64,
    pub x: f64,
    pub y: f64,
    pub q: f64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl ZerothOrderState {
    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho22 + self.rho33 + self.rho44
    }
}

/// First-order harmonic coefficients ρ̃41′(−1) and ρ̃32′(+1), in units of 1/γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeCoherences {
    pub rho41_minus: Complex64,
    pub rho32_plus: Complex64,
}

pub fn zeroth_order(cfg: &AtomicConfig) -> Result<ZerothOrderState> {
    cfg.validate()?;
    let dph = &cfg.dephasing;
    let dec = &cfg.decay;
    if dph.r31 <= 0.0 || dph.r42 <= 0.0 {
        return Err(Error::Degenerate(
            "Gamma_31 and Gamma_42 must be > 0 for a unique steady state".into(),
        ));
    }
    let g2 = cfg.rabi * cfg.rabi;
    let d1 = Complex64::new(
        -dph.r31,
        cfg.control_detuning - 2.0 * cfg.zeeman_excited + 2.0 * cfg.zeeman_ground,
    );
    let d2 = Complex64::new(-dph.r42, cfg.control_detuning);
    let x = 2.0 * dph.r42 / d2.norm_sqr();
    let y = 2.0 * dph.r31 / d1.norm_sqr();
    let q = dec.g23 * (dec.g14 + dec.g24) * y
        + dec.g14 * (dec.g13 + dec.g23) * x
        + 2.0 * x * y * g2 * (dec.g14 + dec.g23);
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::Degenerate(format!(
            "normalisation Q = {q} (all decay channels closed?)"
        )));
    }

    let rho33 = x * y * g2 * dec.g14 / q;
    let rho44 = x * y * g2 * dec.g23 / q;
    let rho11 = x / q * dec.g14 * (dec.g13 + dec.g23 + y * g2);
    let rho22 = y / q * dec.g23 * (dec.g14 + dec.g24 + x * g2);
    let g_conj = Complex64::new(cfg.rabi, 0.0).conj();
    let rho13 = I * g_conj / d1.conj() * (x * dec.g14 / q * (dec.g13 + dec.g23));
    let rho24 = I * g_conj / d2.conj() * (y * dec.g23 / q * (dec.g14 + dec.g24));

    Ok(ZerothOrderState {
        rho11,
        rho22,
        rho33,
        rho44,
        rho13,
        rho24,
        x,
        y,
        q,
        d1,
        d2,
    })
}

/// Harmonic-expansion propagators entering the linear response.
#[derive(Debug, Clone, Copy)]
struct Propagators {
    p: Complex64,
    q: Complex64,
    r: Complex64,
    s: Complex64,
    f: Complex64,
    u: Complex64,
    v: Complex64,
    w: Complex64,
}

impl Propagators {
    fn new(cfg: &AtomicConfig, omega_pc: f64) -> Self {
        let dph = &cfg.dephasing;
        let delta = cfg.control_detuning;
        let b = cfg.zeeman_excited;
        let bp = cfg.zeeman_ground;
        let c = |detuning: f64, rate: f64| Complex64::new(-rate, detuning);
        Propagators {
            p: c(omega_pc + delta + 2.0 * bp, dph.r41),
            q: c(omega_pc + 2.0 * bp, dph.r21),
            r: c(omega_pc + 2.0 * b, dph.r43),
            s: c(omega_pc - delta + 2.0 * b, dph.r32),
            f: c(omega_pc + delta - 2.0 * b, dph.r32),
            u: c(omega_pc - 2.0 * bp, dph.r21),
            v: c(omega_pc - 2.0 * b, dph.r43),
            w: c(omega_pc - delta - 2.0 * bp, dph.r41),
        }
    }
}

fn checked_denominator(den: Complex64, omega_pc: f64) -> Result<Complex64> {
    let n = den.norm();
    if !n.is_finite() || n < 1e-280 {
        return Err(Error::SingularDenominator { omega_pc });
    }
    Ok(den)
}

/// Linear probe response at probe–pump detuning `omega_pc`, given the
/// probe-free state.
pub fn probe_coherences_with(
    cfg: &AtomicConfig,
    state: &ZerothOrderState,
    omega_pc: f64,
) -> Result<ProbeCoherences> {
    let Propagators {
        p,
        q,
        r,
        s,
        f,
        u,
        v,
        w,
    } = Propagators::new(cfg, omega_pc);
    let g = Complex64::new(cfg.rabi, 0.0);
    let g2 = cfg.rabi * cfg.rabi;

    let den1 = checked_denominator(p * q * r * s + g2 * (p + s) * (q + r), omega_pc)?;
    let a1 = -I * (q * r * s + (q + r) * g2) * (state.rho11 - state.rho44) / den1;
    let b1 = r * s * g * state.rho24 / den1;
    let c1 = q * s * g * state.rho13 / den1;

    let den2 = checked_denominator(f * u * v * w + g2 * (f + w) * (u + v), omega_pc)?;
    let a2 = -I * (u * v * w + (v + u) * g2) * (state.rho22 - state.rho33) / den2;
    let b2 = v * w * g * state.rho13 / den2;
    let c2 = u * w * g * state.rho24 / den2;

    Ok(ProbeCoherences {
        rho41_minus: a1 + b1 + c1,
        rho32_plus: a2 + b2 + c2,
    })
}

pub fn probe_coherences(cfg: &AtomicConfig, omega_pc: f64) -> Result<ProbeCoherences> {
    let state = zeroth_order(cfg)?;
    probe_coherences_with(cfg, &state, omega_pc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic_response::config::{DecayRates, Dephasings};

    fn symmetric() -> AtomicConfig {
        let decay = DecayRates {
            g13: 1.0,
            g14: 2.0,
            g23: 2.0,
            g24: 1.0,
        };
        AtomicConfig::with_derived_dephasing(1.0, decay, 0.1, 0.0, 0.0, 0.0, 0.0, 0.4)
    }

    #[test]
    fn no_control_leaves_excited_states_empty() {
        let mut cfg = AtomicConfig::fig1();
        cfg.rabi = 0.0;
        let st = zeroth_order(&cfg).unwrap();
        assert_eq!(st.rho33, 0.0);
        assert_eq!(st.rho44, 0.0);
        assert!((st.rho11 + st.rho22 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fig1_trace_is_one() {
        let st = zeroth_order(&AtomicConfig::fig1()).unwrap();
        assert!((st.trace() - 1.0).abs() < 1e-15);
        for p in [st.rho11, st.rho22, st.rho33, st.rho44] {
            assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn closed_channels_are_degenerate() {
        let mut cfg = AtomicConfig::fig1();
        cfg.decay = DecayRates {
            g13: 0.0,
            g14: 0.0,
            g23: 0.0,
            g24: 0.0,
        };
        assert!(matches!(zeroth_order(&cfg), Err(Error::Degenerate(_))));
    }

    #[test]
    fn symmetric_medium_has_identical_responses() {
        let cfg = symmetric();
        for k in -40..=40 {
            let w = k as f64 * 0.25;
            let pc = probe_coherences(&cfg, w).unwrap();
            let diff = (pc.rho41_minus - pc.rho32_plus).norm();
            assert!(diff <= 1e-14 * pc.rho41_minus.norm(), "w={w} diff={diff}");
        }
    }

    #[test]
    fn zero_dephasing_can_hit_a_singular_denominator() {
        let cfg = AtomicConfig::fig1().with_dephasings(Dephasings {
            r31: 1.5,
            r32: 0.0,
            r41: 0.0,
            r42: 1.5,
            r43: 0.0,
            r21: 0.0,
        });
        let mut cfg = cfg;
        cfg.rabi = 0.0;
        // p = 0 exactly on the bare |1>-|4> resonance
        let w = -cfg.control_detuning - 2.0 * cfg.zeeman_ground;
        assert!(matches!(
            probe_coherences(&cfg, w),
            Err(Error::SingularDenominator { .. })
        ));
    }
}
