//! Number-density estimation from a differential group delay, and the error
//! model of the competing absorption measurement.

use std::f64::consts::PI;

use crate::atomic_response::{
    group_indices, probe_coherences, susceptibility_curve, AtomicConfig, AtomicSusceptibility,
};
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::pulse_engine::{gaussian_spectrum, measured_dgd, propagate, ProbeConfig};

/// Density used to compute κ when the probe does not carry one.
pub const DEFAULT_REFERENCE_DENSITY: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMethod {
    /// N = δτ/κ with κ from the analytic group delay.
    WeakMeasurement,
    /// N from inverting the simulated peak-to-peak delay.
    PulseInversion,
    Absorption,
}

impl DensityMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DensityMethod::WeakMeasurement => "weak-measurement",
            DensityMethod::PulseInversion => "pulse-inversion",
            DensityMethod::Absorption => "absorption",
        }
    }
}

/// Which probe coherence enters the absorption coefficient.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum AbsorptionChannel {
    #[default]
    SigmaMinus,
    SigmaPlus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    /// Estimated number density in cm⁻³.
    pub n_hat: f64,
    /// δτ = κN, in s·cm³.
    pub kappa: f64,
    pub method: DensityMethod,
    /// Modeled |dN/N| of the absorption route at `n_hat`.
    pub rel_error_model: Option<f64>,
}

impl DensityEstimate {
    /// Attaches the absorption-route error for a relative transmission
    /// uncertainty `rel_dxi` = dξ/ξ.
    pub fn with_absorption_model(
        mut self,
        cfg: &AtomicConfig,
        probe: &ProbeConfig,
        rel_dxi: f64,
    ) -> Result<Self> {
        let alpha = absorption_coefficient(cfg, probe, AbsorptionChannel::SigmaMinus)?;
        let xi = (-alpha * self.n_hat).exp();
        self.rel_error_model = Some(absorption_error(xi, rel_dxi * xi, alpha, self.n_hat)?);
        Ok(self)
    }
}

fn reference_probe(probe: &ProbeConfig) -> ProbeConfig {
    let mut p = probe.clone();
    if !(p.density > 0.0) {
        p.density = DEFAULT_REFERENCE_DENSITY;
    }
    p
}

/// κ in units of (1/γ)·cm³ at the operating point.
fn kappa_scaled(cfg: &AtomicConfig, probe: &ProbeConfig) -> Result<f64> {
    let reference = reference_probe(probe);
    let model = AtomicSusceptibility::new(cfg, &reference)?;
    let ng = group_indices(&model, &reference, cfg.gamma)?;
    let kappa = reference.transit_scaled(cfg.gamma) * (ng.minus - ng.plus) / reference.density;
    // differences at rounding level of the indices count as non-dispersive
    let floor = 1e-9 * (ng.minus - 1.0).abs().max((ng.plus - 1.0).abs());
    if !(ng.minus - ng.plus > floor) || !kappa.is_finite() {
        return Err(Error::ZeroKappa(kappa / cfg.gamma));
    }
    Ok(kappa)
}

/// N̂ = δτ/κ with κ = δτ_analytic(N_ref)/N_ref; `dgd` in units of 1/γ.
///
/// N_ref is the probe density, or [`DEFAULT_REFERENCE_DENSITY`] if that is zero.
pub fn estimate_density(
    dgd: f64,
    cfg: &AtomicConfig,
    probe: &ProbeConfig,
) -> Result<DensityEstimate> {
    if !(dgd >= 0.0) {
        return Err(Error::Domain(format!(
            "delay must be nonnegative, got {dgd}"
        )));
    }
    let kappa = kappa_scaled(cfg, probe)?;
    Ok(DensityEstimate {
        n_hat: dgd / kappa,
        kappa: kappa / cfg.gamma,
        method: DensityMethod::WeakMeasurement,
        rel_error_model: None,
    })
}

/// Peak-to-peak delay simulated at density `n`.
pub fn simulated_dgd(cfg: &AtomicConfig, probe: &ProbeConfig, n: f64) -> Result<f64> {
    let mut p = probe.clone();
    p.density = n;
    let grid = FrequencyGrid::for_probe(&p, cfg.gamma)?;
    let spectrum = gaussian_spectrum(&p, cfg.gamma)?;
    let curve = susceptibility_curve(cfg, &p, &grid)?;
    let (plus, minus) = propagate(&spectrum, &curve, &p)?;
    measured_dgd(&plus, &minus)
}

/// N̂ such that the simulated peak-to-peak delay equals `dgd`.
///
/// Unlike [`estimate_density`] this accounts for pulse reshaping when the
/// spectrum is not narrow compared with the transparency window.
pub fn estimate_density_by_inversion(
    dgd: f64,
    cfg: &AtomicConfig,
    probe: &ProbeConfig,
) -> Result<DensityEstimate> {
    if !(dgd >= 0.0) {
        return Err(Error::Domain(format!(
            "delay must be nonnegative, got {dgd}"
        )));
    }
    let kappa = kappa_scaled(cfg, probe)?;
    if dgd == 0.0 {
        return Ok(DensityEstimate {
            n_hat: 0.0,
            kappa: kappa / cfg.gamma,
            method: DensityMethod::PulseInversion,
            rel_error_model: None,
        });
    }
    // start from the analytic guess and widen until the root is bracketed
    let guess = dgd / kappa;
    let g = |n: f64| Ok(simulated_dgd(cfg, probe, n)? - dgd);
    let mut hi = guess;
    let mut tries = 0;
    while g(hi)? < 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 20 {
            return Err(Error::NoSolution(format!(
                "no density reproduces delay {dgd}"
            )));
        }
    }
    let mut lo = 0.5 * hi;
    while lo > 1e-6 * guess && g(lo)? > 0.0 {
        lo *= 0.5;
    }
    let n_hat = bisect_relative(g, lo, hi, 1e-9)?;
    Ok(DensityEstimate {
        n_hat,
        kappa: dgd / n_hat / cfg.gamma,
        method: DensityMethod::PulseInversion,
        rel_error_model: None,
    })
}

fn bisect_relative(
    g: impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    rtol: f64,
) -> Result<f64> {
    if g(lo)? > 0.0 {
        return Err(Error::NoSolution("density bracket lost".into()));
    }
    while hi - lo > rtol * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Absorption coefficient per atom, α = (3Lλ²/2π) Im ρ(1) at the carrier, in cm³.
pub fn absorption_coefficient(
    cfg: &AtomicConfig,
    probe: &ProbeConfig,
    channel: AbsorptionChannel,
) -> Result<f64> {
    let pc = probe_coherences(cfg, cfg.omega_pc(0.0))?;
    let rho = match channel {
        AbsorptionChannel::SigmaMinus => pc.rho41_minus,
        AbsorptionChannel::SigmaPlus => pc.rho32_plus,
    };
    Ok(3.0 * probe.length * probe.lambda.powi(2) / (2.0 * PI) * rho.im)
}

/// |dN/N| = |dξ/ξ| / |Nα| for a transmission ξ = exp(−αN).
pub fn absorption_error(xi: f64, d_xi: f64, alpha: f64, n: f64) -> Result<f64> {
    if !(xi > 0.0 && xi <= 1.0) {
        return Err(Error::Domain(format!(
            "transmission must lie in (0, 1], got {xi}"
        )));
    }
    if !(d_xi > 0.0) || !(alpha > 0.0) || !(n > 0.0) {
        return Err(Error::Domain(format!(
            "uncertainty, absorption coefficient and density must be positive (got {d_xi}, {alpha}, {n})"
        )));
    }
    Ok((d_xi / xi) / (n * alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic_response::analytic_dgd;

    #[test]
    fn self_consistent_and_linear() {
        let cfg = AtomicConfig::fig1();
        let probe = ProbeConfig::fig1();
        let d = analytic_dgd(&cfg, &probe).unwrap();
        let e = estimate_density(d, &cfg, &probe).unwrap();
        assert!((e.n_hat / probe.density - 1.0).abs() < 1e-12);
        let half = estimate_density(0.5 * d, &cfg, &probe).unwrap();
        assert!((half.n_hat / probe.density - 0.5).abs() < 1e-12);
        assert!(e.kappa > 0.0);
    }

    #[test]
    fn vacuum_reference_uses_default_density() {
        let cfg = AtomicConfig::fig1();
        let mut probe = ProbeConfig::fig1();
        probe.density = 0.0;
        let a = estimate_density(100.0, &cfg, &probe).unwrap();
        let b = estimate_density(100.0, &cfg, &ProbeConfig::fig1()).unwrap();
        assert!((a.n_hat / b.n_hat - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_dispersive_medium_has_no_kappa() {
        let mut cfg = AtomicConfig::fig1();
        cfg.zeeman_excited = 0.0;
        cfg.zeeman_ground = 0.0;
        let probe = ProbeConfig::fig1();
        assert!(matches!(
            estimate_density(10.0, &cfg, &probe),
            Err(Error::ZeroKappa(_))
        ));
    }

    #[test]
    fn absorption_error_scalings() {
        let e1 = absorption_error(0.9, 1e-3, 2e-11, 1e9).unwrap();
        let e2 = absorption_error(0.9, 2e-3, 2e-11, 1e9).unwrap();
        let e3 = absorption_error(0.9, 1e-3, 2e-11, 1e8).unwrap();
        assert!((e2 / e1 - 2.0).abs() < 1e-14);
        assert!((e3 / e1 - 10.0).abs() < 1e-12);
        assert!(absorption_error(0.0, 1e-3, 1.0, 1.0).is_err());
        assert!(absorption_error(1.5, 1e-3, 1.0, 1.0).is_err());
        assert!(absorption_error(0.5, 1e-3, -1.0, 1.0).is_err());
    }

    #[test]
    fn fig1_absorption_is_weak_but_positive() {
        let cfg = AtomicConfig::fig1();
        let probe = ProbeConfig::fig1();
        let a = absorption_coefficient(&cfg, &probe, AbsorptionChannel::SigmaMinus).unwrap();
        let depth = a * probe.density;
        assert!(depth > 0.0 && depth < 0.05, "{depth}");
    }
}
