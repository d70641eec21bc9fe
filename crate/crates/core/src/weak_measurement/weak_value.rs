use std::f64::consts::PI;

use super::projection::PostSelection;
use crate::error::{Error, Result};

const DENOMINATOR_FLOOR: f64 = 1e-300;

/// Re W = cot β / (cos²(φ/2) + cot²β sin²(φ/2)) for equal output amplitudes.
pub fn weak_value(ps: &PostSelection, phi: f64) -> Result<f64> {
    let (s, c) = ps.beta.sin_cos();
    let (sh, ch) = (0.5 * phi).sin_cos();
    // numerator and denominator multiplied by sin²β so that β → 0 stays finite
    let den = s * s * ch * ch + c * c * sh * sh;
    if !(den.abs() > DENOMINATOR_FLOOR) {
        return Err(Error::DegenerateWeakValue { beta: ps.beta, phi });
    }
    Ok(s * c / den)
}

/// Re W when the σ− output amplitude is η times the σ+ one.
pub fn weak_value_absorptive(ps: &PostSelection, phi: f64, eta: f64) -> Result<f64> {
    if !(eta >= 0.0) {
        return Err(Error::Domain(format!(
            "amplitude ratio must be nonnegative, got {eta}"
        )));
    }
    let (s, c) = ps.beta.sin_cos();
    let (sh, ch) = (0.5 * phi).sin_cos();
    let (sh2, ch2) = (sh * sh, ch * ch);
    // Every term carries a factor 1/sin²β; it is cleared here.
    let (p, m) = (s + c, s - c);
    let nu = c * c * sh2 + s * s * ch2;
    let mu = c * c * ch2 + s * s * sh2;
    let (num, den) = if eta.is_infinite() {
        (-m * m, nu + mu - 2.0 * s * c)
    } else if eta <= 1.0 {
        (
            p * p - eta * eta * m * m,
            (1.0 + eta).powi(2) * nu + (1.0 - eta).powi(2) * mu + 2.0 * (1.0 - eta * eta) * s * c,
        )
    } else {
        // divide through by η² and work in ε = 1/η
        let e = 1.0 / eta;
        (
            e * e * p * p - m * m,
            (e + 1.0).powi(2) * nu + (e - 1.0).powi(2) * mu + 2.0 * (e * e - 1.0) * s * c,
        )
    };
    if !(den.abs() > DENOMINATOR_FLOOR) {
        return Err(Error::DegenerateWeakValue { beta: ps.beta, phi });
    }
    Ok(num / den)
}

/// How the carrier phase φ depends on the delay being inferred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseModel {
    /// φ known independently of δτ.
    Fixed(f64),
    /// φ = rate·δτ.
    Proportional { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InferenceMode {
    /// δτ = 2⟨t⟩ tan β.
    Linear,
    /// Solves ⟨t⟩ = (δτ/2) Re W(β, φ(δτ)).
    PhaseAware(PhaseModel),
}

/// ⟨t⟩ = (δτ/2) Re W(β, φ).
pub fn mean_arrival_model(dgd: f64, ps: &PostSelection, phase: PhaseModel) -> Result<f64> {
    let phi = match phase {
        PhaseModel::Fixed(phi) => phi,
        PhaseModel::Proportional { rate } => rate * dgd,
    };
    Ok(0.5 * dgd * weak_value(ps, phi)?)
}

/// Delay δτ whose weak-value centroid is `mean_t`.
pub fn infer_dgd(mean_t: f64, ps: &PostSelection, mode: InferenceMode) -> Result<f64> {
    if !mean_t.is_finite() {
        return Err(Error::Domain(format!(
            "mean arrival must be finite, got {mean_t}"
        )));
    }
    let tan = ps.beta.tan();
    if tan == 0.0 || !tan.is_finite() {
        return Err(Error::DegenerateWeakValue {
            beta: ps.beta,
            phi: 0.0,
        });
    }
    match mode {
        InferenceMode::Linear => Ok(2.0 * mean_t * tan),
        InferenceMode::PhaseAware(PhaseModel::Fixed(phi)) => {
            Ok(2.0 * mean_t / weak_value(ps, phi)?)
        }
        InferenceMode::PhaseAware(PhaseModel::Proportional { rate }) => {
            if rate == 0.0 {
                return Ok(2.0 * mean_t / weak_value(ps, 0.0)?);
            }
            let target = mean_t.abs();
            let f =
                |d: f64| mean_arrival_model(d, ps, PhaseModel::Proportional { rate: rate.abs() });
            let top = first_maximum(&f, PI / rate.abs())?;
            if target > f(top)? {
                return Err(Error::NoSolution(format!(
                    "mean arrival {mean_t} exceeds the branch maximum {}",
                    f(top)?
                )));
            }
            let d = bisect(|d| Ok(f(d)? - target), 0.0, top)?;
            Ok(d.copysign(mean_t))
        }
    }
}

/// Location of the maximum of a unimodal `f` on [0, hi] by golden-section search.
fn first_maximum(f: &impl Fn(f64) -> Result<f64>, hi: f64) -> Result<f64> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, hi);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..200 {
        if (b - a) <= 1e-15 * hi {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Root of an increasing function on [lo, hi].
fn bisect(g: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (glo, ghi) = (g(lo)?, g(hi)?);
    if glo > 0.0 || ghi < 0.0 {
        return Err(Error::NoSolution(format!(
            "root not bracketed on [{lo}, {hi}] (values {glo}, {ghi})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
