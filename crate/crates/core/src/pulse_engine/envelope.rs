use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::grid::{trapezoid, TimeGrid};

/// Which field an envelope describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Input,
    SigmaPlus,
    SigmaMinus,
    PostSelected,
}

impl Component {
    pub fn label(&self) -> &'static str {
        match self {
            Component::Input => "input",
            Component::SigmaPlus => "sigma_plus",
            Component::SigmaMinus => "sigma_minus",
            Component::PostSelected => "post_selected",
        }
    }
}

/// Complex envelope on a uniform τ = t − L/c grid (units of 1/γ).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldEnvelope {
    pub grid: TimeGrid,
    pub values: Vec<Complex64>,
    pub component: Component,
}

impl FieldEnvelope {
    pub fn new(grid: TimeGrid, values: Vec<Complex64>, component: Component) -> Self {
        debug_assert_eq!(grid.len, values.len());
        FieldEnvelope {
            grid,
            values,
            component,
        }
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// ∫|E|² dτ by the trapezoidal rule.
    pub fn energy(&self) -> f64 {
        trapezoid(self.values.iter().map(|v| v.norm_sqr()), self.grid.step)
    }

    pub fn peak_intensity(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max)
    }

    /// Relative L2 distance ‖self − other‖ / ‖other‖.
    pub fn relative_l2(&self, other: &FieldEnvelope) -> f64 {
        let num: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = other.values.iter().map(|b| b.norm_sqr()).sum();
        (num / den).sqrt()
    }

    /// CSV with columns `tau_gamma,re,im,abs2`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# component = {}", self.component.label())?;
        writeln!(out, "tau_gamma,re,im,abs2")?;
        for (m, v) in self.values.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(self.grid.time(m)),
                fmt_f64(v.re),
                fmt_f64(v.im),
                fmt_f64(v.norm_sqr())
            )?;
        }
        Ok(())
    }
}

/// Abscissa of the intensity maximum, refined by a parabola through the
/// three samples around the discrete maximum.
///
/// Two equal adjacent maxima resolve to their midpoint.
pub fn peak_time_of(grid: &TimeGrid, intensity: &[f64]) -> Result<f64> {
    let n = intensity.len();
    if n < 3 {
        return Err(Error::BoundaryPeak);
    }
    let mut imax = 0;
    for (i, &v) in intensity.iter().enumerate() {
        if v > intensity[imax] {
            imax = i;
        }
    }
    if imax == 0 || imax == n - 1 {
        return Err(Error::BoundaryPeak);
    }
    let (y0, y1, y2) = (intensity[imax - 1], intensity[imax], intensity[imax + 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    let shift = if curvature == 0.0 {
        0.0
    } else {
        0.5 * (y0 - y2) / curvature
    };
    Ok(grid.time(imax) + shift * grid.step)
}

pub fn peak_time(env: &FieldEnvelope) -> Result<f64> {
    peak_time_of(&env.grid, &env.intensity())
}

/// δτ_meas = t_peak(σ−) − t_peak(σ+).
pub fn measured_dgd(plus: &FieldEnvelope, minus: &FieldEnvelope) -> Result<f64> {
    Ok(peak_time(minus)? - peak_time(plus)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, dt: f64) -> TimeGrid {
        TimeGrid {
            start: -((n / 2) as f64) * dt,
            step: dt,
            len: n,
        }
    }

    fn gaussian(g: &TimeGrid, t0: f64, width: f64) -> FieldEnvelope {
        let v = g
            .times()
            .map(|t| Complex64::new((-((t - t0) / width).powi(2)).exp(), 0.0))
            .collect();
        FieldEnvelope::new(*g, v, Component::Input)
    }

    #[test]
    fn centred_gaussian_peak() {
        let g = grid(1024, 1.0);
        let env = gaussian(&g, 17.0, 40.0);
        assert!((peak_time(&env).unwrap() - 17.0).abs() < 1e-4);
    }

    #[test]
    fn ties_resolve_to_midpoint() {
        let g = grid(8, 1.0);
        let i = [0.0, 0.1, 0.5, 1.0, 1.0, 0.5, 0.1, 0.0];
        assert_eq!(peak_time_of(&g, &i).unwrap(), g.time(3) + 0.5);
    }

    #[test]
    fn boundary_peak_is_an_error() {
        let g = grid(5, 1.0);
        assert!(matches!(
            peak_time_of(&g, &[3.0, 2.0, 1.0, 0.5, 0.1]),
            Err(Error::BoundaryPeak)
        ));
        assert!(matches!(
            peak_time_of(&g, &[0.0, 0.1, 0.2, 0.5, 1.0]),
            Err(Error::BoundaryPeak)
        ));
    }

    #[test]
    fn identical_envelopes_have_zero_dgd() {
        let g = grid(512, 2.0);
        let e = gaussian(&g, -3.3, 50.0);
        assert_eq!(measured_dgd(&e, &e).unwrap(), 0.0);
    }

    #[test]
    fn csv_has_expected_columns() {
        let g = grid(4, 1.0);
        let e = gaussian(&g, 0.0, 1.0);
        let mut buf = Vec::new();
        e.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[1], "tau_gamma,re,im,abs2");
        assert_eq!(lines.len(), 6);
        assert!(lines[4].starts_with("0,1,0,1"));
    }
}
