//! Brute-force density-matrix oracle and shared fixtures.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use weakdgd::atomic_response::{AtomicConfig, DecayRates, Dephasings};

pub type C64 = Complex64;

const IU: C64 = C64 { re: 0.0, im: 1.0 };

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Rotating-frame Hamiltonian of the control-dressed atom (ħ = 1, units of γ).
pub fn hamiltonian(c: &AtomicConfig) -> DMatrix<C64> {
    let (b, bp, d, g) = (
        c.zeeman_excited,
        c.zeeman_ground,
        c.control_detuning,
        c.rabi,
    );
    let mut h = DMatrix::<C64>::zeros(4, 4);
    h[(1, 1)] = C64::from(-2.0 * bp);
    h[(2, 2)] = C64::from(2.0 * b - 2.0 * bp - d);
    h[(3, 3)] = C64::from(-d - 2.0 * bp);
    for (i, j) in [(2, 0), (0, 2), (3, 1), (1, 3)] {
        h[(i, j)] = C64::from(-g);
    }
    h
}

fn dephasing_matrix(c: &AtomicConfig) -> [[f64; 4]; 4] {
    let d = &c.dephasing;
    let mut m = [[0.0; 4]; 4];
    for (i, j, v) in [
        (2, 0, d.r31),
        (2, 1, d.r32),
        (3, 0, d.r41),
        (3, 1, d.r42),
        (3, 2, d.r43),
        (1, 0, d.r21),
    ] {
        m[i][j] = v;
        m[j][i] = v;
    }
    m
}

/// Liouvillian acting on row-major vec(ρ), index 4i + j.
pub fn liouvillian(c: &AtomicConfig) -> DMatrix<C64> {
    let h = hamiltonian(c);
    let gam = dephasing_matrix(c);
    let k = &c.decay;
    let mut l = DMatrix::<C64>::zeros(16, 16);
    for a in 0..16 {
        let mut e = DMatrix::<C64>::zeros(4, 4);
        e[(a / 4, a % 4)] = C64::from(1.0);
        let mut r = (&h * &e - &e * &h) * (-IU);
        r[(0, 0)] += e[(2, 2)] * k.g13 + e[(3, 3)] * k.g14;
        r[(1, 1)] += e[(2, 2)] * k.g23 + e[(3, 3)] * k.g24;
        r[(2, 2)] -= e[(2, 2)] * (k.g13 + k.g23);
        r[(3, 3)] -= e[(3, 3)] * (k.g14 + k.g24);
        for i in 0..4 {
            for j in 0..4 {
                r[(i, j)] -= e[(i, j)] * gam[i][j];
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                l[(4 * i + j, a)] = r[(i, j)];
            }
        }
    }
    l
}

fn with_trace_row(mut m: DMatrix<C64>) -> DMatrix<C64> {
    for col in 0..16 {
        m[(0, col)] = C64::from(0.0);
    }
    for i in 0..4 {
        m[(0, 5 * i)] = C64::from(1.0);
    }
    m
}

fn unvec(v: &DVector<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |i, j| v[4 * i + j])
}

/// Steady state: L ρ = 0 with the ρ11 equation replaced by tr ρ = 1.
pub fn oracle_steady_state(c: &AtomicConfig) -> DMatrix<C64> {
    let m = with_trace_row(liouvillian(c));
    let mut b = DVector::<C64>::zeros(16);
    b[0] = C64::from(1.0);
    unvec(&m.lu().solve(&b).expect("steady state is unique"))
}

/// First-order harmonic coefficients (ρ̃41′(−1), ρ̃32′(+1)) from
/// (L + iω) ρ1 = i[V, ρ0], with tr ρ1 = 0 replacing the ρ11 equation.
pub fn oracle_first_order(c: &AtomicConfig, omega_pc: f64) -> (C64, C64) {
    let rho0 = oracle_steady_state(c);
    let mut m = liouvillian(c);
    for i in 0..16 {
        m[(i, i)] += IU * omega_pc;
    }
    let lu = with_trace_row(m).lu();
    let solve = |i: usize, j: usize| {
        let mut v = DMatrix::<C64>::zeros(4, 4);
        v[(i, j)] = C64::from(-1.0);
        let src = (&v * &rho0 - &rho0 * &v) * IU;
        let mut b = DVector::from_fn(16, |a, _| src[(a / 4, a % 4)]);
        b[0] = C64::from(0.0);
        unvec(&lu.solve(&b).expect("first-order system is regular"))
    };
    (solve(3, 0)[(3, 0)], solve(2, 1)[(2, 1)])
}

/// Random valid medium with independent rates in [0.1, 3] and G in [0.05, 2].
pub fn random_config(r: &mut StdRng) -> AtomicConfig {
    let mut rate = || r.random_range(0.1..3.0);
    let decay = DecayRates {
        g13: rate(),
        g14: rate(),
        g23: rate(),
        g24: rate(),
    };
    let dephasing = Dephasings {
        r31: rate(),
        r32: rate(),
        r41: rate(),
        r42: rate(),
        r43: rate(),
        r21: rate(),
    };
    AtomicConfig::with_derived_dephasing(
        1e7,
        decay,
        0.0,
        r.random_range(-10.0..10.0),
        r.random_range(-10.0..10.0),
        r.random_range(-5.0..5.0),
        r.random_range(-5.0..5.0),
        r.random_range(0.05..2.0),
    )
    .with_dephasings(dephasing)
}

pub fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}
