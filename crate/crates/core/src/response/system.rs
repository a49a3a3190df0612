//! First-order sideband equations solved as a dense 6×6 complex system.
//!
//! Fluctuations are expanded as δO = O₊e^(−iδt) + O₋e^(iδt). Matching the
//! e^(−iδt) components of the linearized equations and of their complex
//! conjugates gives one equation per unknown in the vector
//! x = (S₊, S₋*, Z₊, Z₋*, f₊, f₋*), where Z denotes the population sidebands.
//! The system reads (K − iδ) x = b with unit probe drive, so χ = Γ₂·S₊.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::steady::SteadyState;

pub type Matrix6 = SMatrix<C64, 6, 6>;
pub type Vector6 = SVector<C64, 6>;

const S_PLUS: usize = 0;
const S_MINUS_CONJ: usize = 1;
const Z_PLUS: usize = 2;
const Z_MINUS_CONJ: usize = 3;
const F_PLUS: usize = 4;
const F_MINUS_CONJ: usize = 5;

/// Drift matrix K (δ-independent part) and the unit-drive source vector.
pub fn drift_and_source(p: &ModelParams, ss: &SteadyState) -> (Matrix6, Vector6) {
    let i = C64::i();
    let g = C64::new(p.beta1, p.beta2);
    let gc = g.conj();
    let omega = p.omega_c();
    let (w0, s0, f0) = (ss.w0, ss.s0, ss.f0);
    let mut k = Matrix6::zeros();
    let mut b = Vector6::zeros();

    // coherence, e^(−iδt) component
    k[(S_PLUS, S_PLUS)] = i * p.delta_c + p.gamma2;
    k[(S_PLUS, F_PLUS)] = -w0 * gc;
    k[(S_PLUS, Z_PLUS)] = -2.0 * (gc * f0 - i * omega);
    b[S_PLUS] = -i * w0;

    // conjugated coherence equation
    k[(S_MINUS_CONJ, S_MINUS_CONJ)] = p.gamma2 - i * p.delta_c;
    k[(S_MINUS_CONJ, F_MINUS_CONJ)] = -w0 * g;
    k[(S_MINUS_CONJ, Z_MINUS_CONJ)] = -2.0 * (g * f0.conj() + i * omega);

    // population equation and its conjugate share the same right-hand side
    for row in [Z_PLUS, Z_MINUS_CONJ] {
        k[(row, row)] = C64::new(p.gamma1, 0.0);
        k[(row, F_MINUS_CONJ)] = g * s0;
        k[(row, S_PLUS)] = g * f0.conj() + i * omega;
        k[(row, F_PLUS)] = gc * s0.conj();
        k[(row, S_MINUS_CONJ)] = gc * f0 - i * omega;
        b[row] = i * s0.conj();
    }

    // Majorana amplitude and its conjugate
    k[(F_PLUS, F_PLUS)] = i * p.delta_m + 0.5 * p.kappa_m;
    k[(F_PLUS, S_PLUS)] = -g;
    k[(F_MINUS_CONJ, F_MINUS_CONJ)] = 0.5 * p.kappa_m - i * p.delta_m;
    k[(F_MINUS_CONJ, S_MINUS_CONJ)] = -gc;

    (k, b)
}

/// Sideband amplitudes x(δ) per unit probe Rabi frequency.
pub fn sideband_amplitudes(p: &ModelParams, ss: &SteadyState, delta: f64) -> Result<Vector6> {
    let (m, b) = system_at(p, ss, delta);
    solve(m, &b)
}

fn system_at(p: &ModelParams, ss: &SteadyState, delta: f64) -> (Matrix6, Vector6) {
    let (mut m, b) = drift_and_source(p, ss);
    for d in 0..6 {
        m[(d, d)] -= C64::i() * delta;
    }
    (m, b)
}

fn solve(m: Matrix6, b: &Vector6) -> Result<Vector6> {
    let lu = m.lu();
    match lu.solve(b) {
        Some(x) if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => Ok(x),
        _ => Err(Error::Solvability { smallest_singular_value: smallest_singular_value(m) }),
    }
}

fn smallest_singular_value(m: Matrix6) -> f64 {
    m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

/// χ⁽¹⁾ at probe–pump detuning δ from the 6×6 solve.
pub fn chi1_linear_system(p: &ModelParams, ss: &SteadyState, delta: f64) -> Result<C64> {
    Ok(p.gamma2 * sideband_amplitudes(p, ss, delta)?[S_PLUS])
}

/// χ⁽¹⁾ and its exact δ-derivative. Only the diagonal of the system depends
/// on δ, so dx/dδ solves (K − iδ) x' = i x with the same factorization.
pub fn chi1_with_derivative(p: &ModelParams, ss: &SteadyState, delta: f64) -> Result<(C64, C64)> {
    let (m, b) = system_at(p, ss, delta);
    let lu = m.lu();
    let singular = || Error::Solvability { smallest_singular_value: smallest_singular_value(m) };
    let x = lu.solve(&b).ok_or_else(singular)?;
    let dx = lu.solve(&(x * C64::i())).ok_or_else(singular)?;
    Ok((p.gamma2 * x[S_PLUS], p.gamma2 * dx[S_PLUS]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steady::steady_state;

    fn bare_lorentzian(p: &ModelParams, delta: f64) -> C64 {
        C64::i() * p.gamma2 / C64::new(p.gamma2, p.delta_c - delta)
    }

    #[test]
    fn undriven_uncoupled_reduces_to_lorentzian() {
        let p = ModelParams { beta1: 0.0, beta2: 0.0, omega_c_rabi_sq: 0.0, delta_c: 0.3, ..ModelParams::reference() };
        let ss = steady_state(&p).unwrap();
        for k in 0..201 {
            let delta = -1.0 + 0.01 * k as f64;
            let chi = chi1_linear_system(&p, &ss, delta).unwrap();
            assert!((chi - bare_lorentzian(&p, delta)).norm() < 1e-10);
        }
        let at_line = chi1_linear_system(&p, &ss, p.delta_c).unwrap();
        assert!((at_line - C64::i()).norm() < 1e-15);
    }

    #[test]
    fn population_sidebands_are_conjugate_consistent() {
        let p = ModelParams { delta_c: 0.5, delta_m: -0.5, ..ModelParams::reference() };
        let ss = steady_state(&p).unwrap();
        let x = sideband_amplitudes(&p, &ss, 0.37).unwrap();
        assert!((x[Z_PLUS] - x[Z_MINUS_CONJ]).norm() < 1e-14 * x[Z_PLUS].norm().max(1e-300));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = ModelParams { delta_c: 0.2, delta_m: -0.4, kappa_m: 0.02, ..ModelParams::reference() };
        let ss = steady_state(&p).unwrap();
        let delta = 0.13;
        let (_, d) = chi1_with_derivative(&p, &ss, delta).unwrap();
        let h = 1e-5;
        let fd = (chi1_linear_system(&p, &ss, delta + h).unwrap()
            - chi1_linear_system(&p, &ss, delta - h).unwrap())
            / (2.0 * h);
        assert!((d - fd).norm() < 1e-6 * d.norm());
    }

    #[test]
    fn singular_system_reports_singular_value() {
        // κ_M = 0 with the Majorana mode uncoupled leaves a zero pivot at δ = Δ_M.
        let p = ModelParams { beta1: 0.0, beta2: 0.0, kappa_m: 0.0, ..ModelParams::reference() };
        let ss = SteadyState { w0: -1.0, s0: C64::new(0.0, 0.0), f0: C64::new(0.0, 0.0), residual: 0.0, multiplicity: 1 };
        match chi1_linear_system(&p, &ss, 0.0) {
            Err(Error::Solvability { smallest_singular_value }) => assert!(smallest_singular_value < 1e-12),
            other => panic!("expected solvability error, got {other:?}"),
        }
    }
}
