//! Uniform frequency grid and its conjugate time grid.
//!
//! Frequency offsets are ω_k = (k − n/2)·dω and times t_m = (m − n/2)·dt with
//! dω·dt = 2π/n, so a length-n DFT maps one onto the other exactly.

use std::f64::consts::PI;

use crate::error::Result;
use crate::pulse_engine::ProbeConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    pub n_points: usize,
    /// Offset spacing dω in units of γ.
    pub step: f64,
}

impl FrequencyGrid {
    pub fn new(n_points: usize, step: f64) -> Self {
        FrequencyGrid { n_points, step }
    }

    /// Grid implied by a probe's grid settings, in units of `gamma`.
    pub fn for_probe(probe: &ProbeConfig, gamma: f64) -> Result<Self> {
        probe.validate()?;
        let span = probe.grid.span * probe.sigma_scaled(gamma);
        Ok(FrequencyGrid::new(
            probe.grid.n_points,
            span / probe.grid.n_points as f64,
        ))
    }

    pub fn offset(&self, k: usize) -> f64 {
        (k as f64 - (self.n_points / 2) as f64) * self.step
    }

    pub fn offsets(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.offset(k)).collect()
    }

    pub fn time_grid(&self) -> TimeGrid {
        let dt = 2.0 * PI / (self.n_points as f64 * self.step);
        TimeGrid {
            start: -((self.n_points / 2) as f64) * dt,
            step: dt,
            len: self.n_points,
        }
    }
}

/// Uniform time samples, in units of 1/γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl TimeGrid {
    pub fn time(&self, m: usize) -> f64 {
        self.start + m as f64 * self.step
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |m| self.time(m))
    }

    pub fn matches(&self, other: &TimeGrid) -> bool {
        self.len == other.len
            && (self.step - other.step).abs() <= 1e-12 * self.step.abs()
            && (self.start - other.start).abs() <= 1e-12 * self.start.abs().max(self.step.abs())
    }
}

/// Trapezoidal quadrature of uniformly spaced samples.
pub fn trapezoid(values: impl IntoIterator<Item = f64>, step: f64) -> f64 {
    let mut iter = values.into_iter();
    let Some(first) = iter.next() else {
        return 0.0;
    };
    let mut sum = 0.5 * first;
    let mut last = first;
    let mut count = 1usize;
    for v in iter {
        sum += v;
        last = v;
        count += 1;
    }
    if count == 1 {
        return 0.0;
    }
    (sum - 0.5 * last) * step
}
