use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{trapezoid, TimeGrid};
use crate::pulse_engine::{Component, FieldEnvelope};

/// Smallest post-selected energy fraction for which a centroid is reported.
pub const EXTINCTION_THRESHOLD: f64 = 1e-12;

/// Post-selected polarization cos(π/4−β)|σ+⟩ − sin(π/4−β)|σ−⟩.
///
/// The preselected state is (|σ+⟩ + |σ−⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostSelection {
    /// Angle β in radians.
    pub beta: f64,
}

impl Default for PostSelection {
    fn default() -> Self {
        PostSelection { beta: 0.1 }
    }
}

impl PostSelection {
    pub fn new(beta: f64) -> Result<Self> {
        let ps = PostSelection { beta };
        ps.validate()?;
        Ok(ps)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() {
            return Err(Error::invalid("post_selection.beta", "must be finite"));
        }
        Ok(())
    }

    /// Projection amplitudes (cos(π/4−β), sin(π/4−β)).
    pub fn amplitudes(&self) -> (f64, f64) {
        let a = FRAC_PI_4 - self.beta;
        (a.cos(), a.sin())
    }
}

/// E_out(t) = cos(π/4−β) E+(t) − sin(π/4−β) E−(t).
pub fn postselect(
    plus: &FieldEnvelope,
    minus: &FieldEnvelope,
    ps: &PostSelection,
) -> Result<FieldEnvelope> {
    if !plus.grid.matches(&minus.grid) {
        return Err(Error::GridMismatch);
    }
    let (c1, c2) = ps.amplitudes();
    let values = plus
        .values
        .iter()
        .zip(&minus.values)
        .map(|(p, m)| p * c1 - m * c2)
        .collect();
    Ok(FieldEnvelope::new(
        plus.grid,
        values,
        Component::PostSelected,
    ))
}

/// |E_out(t)|².
pub fn output_intensity(out: &FieldEnvelope) -> Vec<f64> {
    out.intensity()
}

/// The three contributions to the post-selected intensity: the two direct
/// terms and the interference term −2 Re(E+* E−) sin(π/4−β) cos(π/4−β).
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityTerms {
    pub direct_plus: Vec<f64>,
    pub direct_minus: Vec<f64>,
    pub interference: Vec<f64>,
}

impl IntensityTerms {
    pub fn total(&self) -> Vec<f64> {
        self.direct_plus
            .iter()
            .zip(&self.direct_minus)
            .zip(&self.interference)
            .map(|((a, b), c)| a + b + c)
            .collect()
    }

    /// Intensity with the cross term dropped.
    pub fn incoherent(&self) -> Vec<f64> {
        self.direct_plus
            .iter()
            .zip(&self.direct_minus)
            .map(|(a, b)| a + b)
            .collect()
    }
}

pub fn intensity_terms(
    plus: &FieldEnvelope,
    minus: &FieldEnvelope,
    ps: &PostSelection,
) -> Result<IntensityTerms> {
    if !plus.grid.matches(&minus.grid) {
        return Err(Error::GridMismatch);
    }
    let (c1, c2) = ps.amplitudes();
    let mut terms = IntensityTerms {
        direct_plus: Vec::with_capacity(plus.values.len()),
        direct_minus: Vec::with_capacity(plus.values.len()),
        interference: Vec::with_capacity(plus.values.len()),
    };
    for (p, m) in plus.values.iter().zip(&minus.values) {
        terms.direct_plus.push(p.norm_sqr() * c1 * c1);
        terms.direct_minus.push(m.norm_sqr() * c2 * c2);
        terms.interference.push(-2.0 * (p.conj() * m).re * c1 * c2);
    }
    Ok(terms)
}

/// Intensity centroid ∫t I dt / ∫I dt (trapezoidal).
///
/// `reference_energy` is the input pulse energy; the centroid is refused when
/// ∫I dt falls below [`EXTINCTION_THRESHOLD`] of it.
pub fn mean_arrival(grid: &TimeGrid, intensity: &[f64], reference_energy: f64) -> Result<f64> {
    if intensity.len() != grid.len {
        return Err(Error::GridMismatch);
    }
    let energy = trapezoid(intensity.iter().copied(), grid.step);
    let fraction = if reference_energy > 0.0 {
        energy / reference_energy
    } else {
        0.0
    };
    if !(fraction >= EXTINCTION_THRESHOLD) || !fraction.is_finite() {
        return Err(Error::VanishingIntensity { fraction });
    }
    let moment = trapezoid(
        intensity.iter().enumerate().map(|(m, i)| grid.time(m) * i),
        grid.step,
    );
    Ok(moment / energy)
}

/// η = √(∫|E−|²)/√(∫|E+|²).
pub fn amplitude_ratio(plus: &FieldEnvelope, minus: &FieldEnvelope) -> Result<f64> {
    ratio(plus.energy(), minus.energy())
}

/// η from peak amplitudes, max|E−|/max|E+|.
pub fn peak_amplitude_ratio(plus: &FieldEnvelope, minus: &FieldEnvelope) -> Result<f64> {
    ratio(plus.peak_intensity(), minus.peak_intensity())
}

fn ratio(plus: f64, minus: f64) -> Result<f64> {
    if plus <= 0.0 || minus <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    Ok((minus / plus).sqrt())
}

/// Shifts an envelope by `delay` (1/γ) by linear interpolation; samples
/// falling outside the window are zero.
pub fn delayed(env: &FieldEnvelope, delay: f64, scale: Complex64) -> FieldEnvelope {
    let g = env.grid;
    let values = (0..g.len)
        .map(|m| {
            let x = (g.time(m) - delay - g.start) / g.step;
            let i = x.floor();
            if i < 0.0 || i + 1.0 >= g.len as f64 {
                return Complex64::new(0.0, 0.0);
            }
            let (i, f) = (i as usize, x - i);
            (env.values[i] * (1.0 - f) + env.values[i + 1] * f) * scale
        })
        .collect();
    FieldEnvelope::new(g, values, env.component)
}
