//! Time-domain cross-check: integrate the mean-field equations with an
//! explicit weak probe and read the first-order sideband off the trajectory.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{mean_field_rhs, Eq3Variant, MeanFieldState, ProbeDrive};
use crate::error::{Error, Result};
use crate::ode::Dopri5;
use crate::params::ModelParams;
use crate::steady::steady_state;

/// Relative agreement required between the two halves of the window.
pub const SETTLING_TOLERANCE: f64 = 2e-3;
/// Smallest |δ| the oracle accepts.
pub const MIN_ABS_DELTA: f64 = 1e-3;
const MAX_TRANSIENT_DOUBLINGS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// μE_s/ħ, GHz.
    pub probe_rabi: f64,
    /// Probe–pump beat frequency, GHz.
    pub delta: f64,
    /// Discarded settling time, ns.
    pub t_transient: f64,
    /// Whole beat periods in the demodulation window.
    pub n_periods: usize,
    /// Integrator step cap, ns.
    pub dt_max: f64,
    pub samples_per_period: usize,
    pub variant: Eq3Variant,
}

impl OracleConfig {
    /// Probe at 10⁻⁴·max(Γ₂, |δ|, Ω_c), transient 20/min(Γ₁, Γ₂), twenty
    /// periods sampled 64 times each, step cap of 1/20 period.
    pub fn for_params(p: &ModelParams, delta: f64) -> Self {
        let period = 2.0 * PI / delta.abs();
        OracleConfig {
            probe_rabi: 1e-4 * linearity_scale(p, delta),
            delta,
            t_transient: 20.0 / p.gamma1.min(p.gamma2),
            n_periods: 20,
            dt_max: period / 20.0,
            samples_per_period: 64,
            variant: Eq3Variant::Symmetrized,
        }
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.delta.abs()
    }

    pub fn window(&self) -> f64 {
        self.n_periods as f64 * self.period()
    }

    pub fn validate(&self, p: &ModelParams) -> Result<()> {
        let mut problems = Vec::new();
        let limit = 1e-3 * linearity_scale(p, self.delta);
        if !(self.probe_rabi > 0.0 && self.probe_rabi <= limit) {
            problems.push(format!("probe_rabi must be in (0, {limit:e}]"));
        }
        if !(self.delta.abs() >= MIN_ABS_DELTA) || !self.delta.is_finite() {
            problems.push(format!("|delta| must be finite and ≥ {MIN_ABS_DELTA}"));
        }
        if self.n_periods < 20 {
            problems.push("n_periods must be ≥ 20".into());
        }
        if !(self.t_transient >= 0.0) || !self.t_transient.is_finite() {
            problems.push("t_transient must be finite and ≥ 0".into());
        }
        if !(self.dt_max > 0.0) {
            problems.push("dt_max must be > 0".into());
        }
        if self.samples_per_period < 8 {
            problems.push("samples_per_period must be ≥ 8".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}

fn linearity_scale(p: &ModelParams, delta: f64) -> f64 {
    p.gamma2.max(delta.abs()).max(p.omega_c())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub sz: Vec<C64>,
    pub sm: Vec<C64>,
    pub f: Vec<C64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_abs_im_sz(&self) -> f64 {
        self.sz.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }
}

/// Integrates from the ground state (−½, 0, 0) and samples the demodulation
/// window [t_transient, t_transient + n_periods·2π/|δ|] uniformly, endpoints
/// included. With `probe_rabi = 0` the probe term is left out.
pub fn integrate_mean_field(p: &ModelParams, cfg: &OracleConfig) -> Result<Trajectory> {
    let p = p.validated()?;
    if cfg.probe_rabi != 0.0 {
        cfg.validate(&p)?;
    }
    let n = cfg.n_periods * cfg.samples_per_period;
    let window = cfg.window();
    let times: Vec<f64> = (0..=n).map(|k| cfg.t_transient + window * k as f64 / n as f64).collect();
    integrate_at(&p, cfg, &times)
}

fn integrate_at(p: &ModelParams, cfg: &OracleConfig, times: &[f64]) -> Result<Trajectory> {
    let probe = (cfg.probe_rabi != 0.0).then_some(ProbeDrive { rabi: cfg.probe_rabi, delta: cfg.delta });
    let solver = Dopri5 { dt_max: cfg.dt_max, ..Dopri5::default() };
    let rhs = |t: f64, y: &[f64; 6]| mean_field_rhs(p, cfg.variant, probe, t, &MeanFieldState::from_slice(y)).to_array();
    let (states, _) = solver.solve_dense(rhs, 0.0, MeanFieldState::ground().to_array(), times)?;
    let mut traj = Trajectory {
        times: times.to_vec(),
        sz: Vec::with_capacity(times.len()),
        sm: Vec::with_capacity(times.len()),
        f: Vec::with_capacity(times.len()),
    };
    for y in &states {
        let s = MeanFieldState::from_slice(y);
        traj.sz.push(s.sz);
        traj.sm.push(s.sm);
        traj.f.push(s.f);
    }
    Ok(traj)
}

/// Fourier coefficient of ⟨S⁻⟩ − s0 at e^(−i·order·δt) over the last
/// `periods` whole beat periods of the trajectory.
fn harmonic(traj: &Trajectory, cfg: &OracleConfig, s0: C64, order: f64, periods: usize) -> Result<C64> {
    let n = traj.len();
    let total = window_periods(traj, cfg)?;
    let per = (n - 1) / total;
    if per * total != n - 1 || periods == 0 || periods > total {
        return Err(Error::Config("window is not uniformly sampled in whole periods".into()));
    }
    // periodic integrand on a uniform grid: the rectangle sum is the
    // trapezoid rule and is spectrally accurate
    let start = n - 1 - periods * per;
    let count = periods * per;
    let sum: C64 = (start..n - 1)
        .map(|k| (traj.sm[k] - s0) * C64::from_polar(1.0, order * cfg.delta * traj.times[k]))
        .sum();
    Ok(sum / count as f64)
}

/// χ_oracle = Γ₂·S₊/probe_rabi, with S₊ the e^(−iδt) coefficient of
/// ⟨S⁻⟩ − S₀ over the whole window.
pub fn demodulate_sideband(p: &ModelParams, traj: &Trajectory, cfg: &OracleConfig, s0: C64) -> Result<C64> {
    let n_periods = window_periods(traj, cfg)?;
    let s_plus = harmonic(traj, cfg, s0, 1.0, n_periods)?;
    Ok(if cfg.probe_rabi == 0.0 { s_plus * p.gamma2 } else { s_plus * p.gamma2 / cfg.probe_rabi })
}

fn window_periods(traj: &Trajectory, cfg: &OracleConfig) -> Result<usize> {
    let n = traj.len();
    if n < 2 {
        return Err(Error::Config("trajectory too short to demodulate".into()));
    }
    let cycles = (traj.times[n - 1] - traj.times[0]) / cfg.period();
    if (cycles - cycles.round()).abs() > 1e-9 * cycles.max(1.0) || cycles.round() < 1.0 {
        return Err(Error::Config(format!("window spans {cycles} beat periods, not a whole number")));
    }
    Ok(cycles.round() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub delta: f64,
    pub chi: C64,
    /// |second-harmonic amplitude| / |first-harmonic amplitude|.
    pub second_harmonic_ratio: f64,
    /// Relative difference of the sideband from the last two half-windows.
    pub settling_rel_diff: f64,
    pub settled: bool,
    pub t_transient_used: f64,
    pub max_abs_im_sz: f64,
}

/// Full oracle estimate. If the two half-windows disagree by more than
/// 0.2 %, the transient is doubled (up to five times) and the run repeated.
pub fn oracle_chi(p: &ModelParams, cfg: &OracleConfig) -> Result<OracleResult> {
    let p = p.validated()?;
    cfg.validate(&p)?;
    let ss = steady_state(&p)?;
    let half = cfg.n_periods / 2;
    let mut cfg = *cfg;
    let mut doublings = 0;
    loop {
        let traj = integrate_mean_field(&p, &cfg)?;
        let chi = demodulate_sideband(&p, &traj, &cfg, ss.s0)?;
        let s_plus = chi * cfg.probe_rabi / p.gamma2;
        let second = harmonic(&traj, &cfg, ss.s0, 2.0, cfg.n_periods)?;
        let last = harmonic(&traj, &cfg, ss.s0, 1.0, half)?;
        let previous = {
            let cut = traj.len() - half * cfg.samples_per_period;
            let head = Trajectory {
                times: traj.times[..cut].to_vec(),
                sz: traj.sz[..cut].to_vec(),
                sm: traj.sm[..cut].to_vec(),
                f: traj.f[..cut].to_vec(),
            };
            harmonic(&head, &cfg, ss.s0, 1.0, half)?
        };
        let settling_rel_diff = (last - previous).norm() / last.norm().max(previous.norm()).max(f64::MIN_POSITIVE);
        let settled = settling_rel_diff < SETTLING_TOLERANCE;
        if settled || doublings == MAX_TRANSIENT_DOUBLINGS {
            return Ok(OracleResult {
                delta: cfg.delta,
                chi,
                second_harmonic_ratio: second.norm() / s_plus.norm(),
                settling_rel_diff,
                settled,
                t_transient_used: cfg.t_transient,
                max_abs_im_sz: traj.max_abs_im_sz(),
            });
        }
        cfg.t_transient *= 2.0;
        doublings += 1;
    }
}

/// Oracle and linear-system susceptibility at one beat frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub delta: f64,
    pub chi_analytic: C64,
    pub oracle: OracleResult,
}

/// Runs the oracle at every δ on a pool of `workers` threads, in input order.
pub fn oracle_grid(p: &ModelParams, deltas: &[f64], variant: Eq3Variant, workers: usize) -> Result<Vec<OracleComparison>> {
    use rayon::prelude::*;
    let p = p.validated()?;
    let ss = steady_state(&p)?;
    if workers == 0 {
        return Err(Error::Config("worker count must be ≥ 1".into()));
    }
    for &delta in deltas {
        OracleConfig { variant, ..OracleConfig::for_params(&p, delta) }.validate(&p)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| {
        deltas
            .par_iter()
            .map(|&delta| {
                let cfg = OracleConfig { variant, ..OracleConfig::for_params(&p, delta) };
                Ok(OracleComparison {
                    delta,
                    chi_analytic: crate::response::chi1_linear_system(&p, &ss, delta)?,
                    oracle: oracle_chi(&p, &cfg)?,
                })
            })
            .collect()
    })
}

/// max_k |χ_oracle − χ_analytic| / max_k |χ_analytic|.
pub fn max_relative_error(rows: &[OracleComparison]) -> f64 {
    let scale = rows.iter().map(|r| r.chi_analytic.norm()).fold(0.0, f64::max);
    rows.iter().map(|r| (r.oracle.chi - r.chi_analytic).norm()).fold(0.0, f64::max) / scale
}

/// The 21 beat frequencies δ_k = 0.015 + 0.03·(k − 10), k = 0..20, used for
/// the oracle comparison; none of them is zero.
pub fn standard_deltas() -> Vec<f64> {
    (0..21).map(|k| 0.015 + 0.03 * (k as f64 - 10.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::chi1_linear_system;

    fn quiet(p: &ModelParams, delta: f64) -> OracleConfig {
        OracleConfig { probe_rabi: 0.0, ..OracleConfig::for_params(p, delta) }
    }

    #[test]
    fn config_validation() {
        let p = ModelParams::reference();
        let good = OracleConfig::for_params(&p, 0.2);
        assert!(good.validate(&p).is_ok());
        let loud = OracleConfig { probe_rabi: 1.0, ..good };
        assert!(matches!(loud.validate(&p), Err(Error::Config(_))));
        let short = OracleConfig { n_periods: 19, ..good };
        assert!(short.validate(&p).is_err());
        let dc = OracleConfig { delta: 0.0, ..good };
        assert!(dc.validate(&p).is_err());
    }

    #[test]
    fn ground_state_without_drive_is_constant() {
        let p = ModelParams { omega_c_rabi_sq: 0.0, ..ModelParams::reference() };
        let traj = integrate_mean_field(&p, &quiet(&p, 0.3)).unwrap();
        let g = MeanFieldState::ground();
        for k in 0..traj.len() {
            assert_eq!(traj.sz[k], g.sz);
            assert_eq!(traj.sm[k], g.sm);
            assert_eq!(traj.f[k], g.f);
        }
    }

    #[test]
    fn pump_only_trajectory_reaches_fixed_point() {
        for p in [
            ModelParams::reference(),
            ModelParams { delta_c: 0.5, delta_m: -0.5, kappa_m: 0.05, ..ModelParams::reference() },
            ModelParams { beta1: 0.0, beta2: 0.0, ..ModelParams::reference() },
        ] {
            let ss = steady_state(&p).unwrap();
            let cfg = OracleConfig { t_transient: 400.0, ..quiet(&p, 0.5) };
            let traj = integrate_mean_field(&p, &cfg).unwrap();
            let k = traj.len() - 1;
            assert!((traj.sz[k].re - 0.5 * ss.w0).abs() < 1e-8, "{} vs {}", traj.sz[k].re, 0.5 * ss.w0);
            assert!((traj.sm[k] - ss.s0).norm() < 1e-8);
            assert!((traj.f[k] - ss.f0).norm() < 1e-8);
        }
    }

    #[test]
    fn population_stays_real_and_bounded() {
        let p = ModelParams::reference();
        let cfg = OracleConfig::for_params(&p, 0.2);
        let traj = integrate_mean_field(&p, &cfg).unwrap();
        assert!(traj.max_abs_im_sz() < 1e-9);
        assert!(traj.sz.iter().all(|z| z.re >= -0.5 - 1e-9 && z.re <= 0.5 + 1e-9));
    }

    #[test]
    fn probe_off_gives_no_sideband() {
        let p = ModelParams::reference();
        let ss = steady_state(&p).unwrap();
        // long enough for the slowest relaxation (rate ≈ 0.05 GHz) to die out
        let cfg = OracleConfig { t_transient: 800.0, ..quiet(&p, 0.2) };
        let traj = integrate_mean_field(&p, &cfg).unwrap();
        let s_plus = demodulate_sideband(&p, &traj, &cfg, ss.s0).unwrap() / p.gamma2;
        assert!(s_plus.norm() < 1e-10);
    }

    #[test]
    fn fractional_window_is_rejected() {
        let p = ModelParams::reference();
        let cfg = OracleConfig::for_params(&p, 0.2);
        let mut traj = integrate_mean_field(&p, &cfg).unwrap();
        traj.times.truncate(traj.len() - 7);
        traj.sm.truncate(traj.times.len());
        assert!(matches!(demodulate_sideband(&p, &traj, &cfg, C64::new(0.0, 0.0)), Err(Error::Config(_))));
    }

    #[test]
    fn oracle_matches_linear_response() {
        let p = ModelParams { delta_c: 0.5, delta_m: -0.5, kappa_m: 0.01, ..ModelParams::reference() };
        let ss = steady_state(&p).unwrap();
        for delta in [-0.4, 0.25, 0.5] {
            let r = oracle_chi(&p, &OracleConfig::for_params(&p, delta)).unwrap();
            let exact = chi1_linear_system(&p, &ss, delta).unwrap();
            assert!((r.chi - exact).norm() < 1e-2 * exact.norm(), "{delta}: {} vs {exact}", r.chi);
            assert!(r.settled);
            assert!(r.second_harmonic_ratio < 0.1);
        }
    }

    #[test]
    fn standard_grid_avoids_zero() {
        let d = standard_deltas();
        assert_eq!(d.len(), 21);
        assert!(d.iter().all(|x| x.abs() >= 0.015 - 1e-15));
        assert!((d[0] + 0.285).abs() < 1e-15 && (d[20] - 0.315).abs() < 1e-15);
    }
}
