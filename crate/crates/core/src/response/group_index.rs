//! Group-velocity index from the dispersion slope at the exciton line,
//! n_g/Π = Γ₂·Re(dχ⁽¹⁾/dω_s) at ω_s = ω_e (δ = Δc).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{chi1, Eq10Variant, Path};
use crate::error::{Error, Result};
use crate::params::{GroupIndexScale, ModelParams};
use crate::steady::{steady_state, SteadyState};

/// Initial central-difference step as a fraction of Γ₂.
pub const INITIAL_STEP_FRACTION: f64 = 1e-3;
/// Extrapolation stops once the error estimate is below this fraction of
/// max(1, |Re dχ/dδ|).
pub const RICHARDSON_TOLERANCE: f64 = 1e-6;
/// Further halvings allowed when the first two do not converge.
const MAX_LEVEL: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupIndexResult {
    /// n_g in units of Π.
    pub ng_over_pi: f64,
    /// n_g with the caller's scale applied.
    pub ng: f64,
    /// Re(dχ⁽¹⁾/dω_s) at ω_s = ω_e, GHz⁻¹.
    pub derivative_estimate: f64,
    /// Smallest central-difference step that entered the extrapolation.
    pub step_used: f64,
    pub richardson_error: f64,
}

/// Central difference of χ about δ = Δc with half-width `h`.
fn central(p: &ModelParams, ss: &SteadyState, h: f64, path: Path, variant: Eq10Variant) -> Result<C64> {
    let x = p.delta_c;
    Ok((chi1(p, ss, x + h, path, variant)? - chi1(p, ss, x - h, path, variant)?) / (2.0 * h))
}

/// Richardson-extrapolated dχ/dδ at δ = Δc. Starts at h₀ = 10⁻³Γ₂ and
/// extrapolates over (h, h/2, h/4); keeps halving while the error estimate
/// exceeds the tolerance.
pub fn richardson_derivative(
    p: &ModelParams,
    ss: &SteadyState,
    path: Path,
    variant: Eq10Variant,
) -> Result<(C64, f64, f64)> {
    let h0 = INITIAL_STEP_FRACTION * p.gamma2;
    let mut diffs = vec![
        central(p, ss, h0, path, variant)?,
        central(p, ss, h0 / 2.0, path, variant)?,
    ];
    let mut best: Option<(C64, f64, f64)> = None;
    for level in 2..=MAX_LEVEL {
        let h = h0 / f64::powi(2.0, level as i32);
        diffs.push(central(p, ss, h, path, variant)?);
        let n = diffs.len();
        let coarse = (4.0 * diffs[n - 2] - diffs[n - 3]) / 3.0;
        let fine = (4.0 * diffs[n - 1] - diffs[n - 2]) / 3.0;
        let extrapolated = (16.0 * fine - coarse) / 15.0;
        let error = (extrapolated - fine).norm();
        if best.is_none_or(|(_, _, e)| error < e) {
            best = Some((extrapolated, h, error));
        }
        if error < RICHARDSON_TOLERANCE * extrapolated.re.abs().max(1.0) {
            return Ok((extrapolated, h, error));
        }
    }
    let error_estimate = best.map_or(f64::INFINITY, |b| b.2);
    Err(Error::Differentiation { error_estimate })
}

pub fn group_index(
    p: &ModelParams,
    scale: &GroupIndexScale,
    path: Path,
    variant: Eq10Variant,
) -> Result<GroupIndexResult> {
    let ss = steady_state(p)?;
    group_index_with_state(p, &ss, scale, path, variant)
}

pub fn group_index_with_state(
    p: &ModelParams,
    ss: &SteadyState,
    scale: &GroupIndexScale,
    path: Path,
    variant: Eq10Variant,
) -> Result<GroupIndexResult> {
    let (derivative, step_used, richardson_error) = richardson_derivative(p, ss, path, variant)?;
    let derivative_estimate = derivative.re;
    let ng_over_pi = p.gamma2 * derivative_estimate;
    Ok(GroupIndexResult {
        ng_over_pi,
        ng: ng_over_pi * scale.scale_pi,
        derivative_estimate,
        step_used,
        richardson_error,
    })
}

/// Symmetric secant slope Re[χ(Δc+h) − χ(Δc−h)]/(2h) on the linear-system
/// path, with h = Γ₂/200.
pub fn secant_slope(p: &ModelParams, ss: &SteadyState) -> Result<f64> {
    let h = p.gamma2 / 200.0;
    Ok(central(p, ss, h, Path::LinearSystem, Eq10Variant::Derived)?.re)
}
