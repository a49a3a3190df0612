//! Steady state of the pumped dot–Majorana system.
//!
//! The population inversion w₀ = 2⟨Sᶻ⟩ solves
//!
//! ```text
//! Γ₁(w₀+1)[A²w₀² − ABw₀ + C] + 4Ω_c²Γ₂D w₀ = 0
//! A = β₁²+β₂²,  B = Γ₂κ_M − 2ΔcΔ_M,
//! C = (Δc²+Γ₂²)(Δ_M²+κ_M²/4),  D = Δ_M²+κ_M²/4
//! ```
//!
//! The bracket equals |(iΔc+Γ₂)(iΔ_M+κ_M/2) − w₀A|² ≥ 0, so the cubic is
//! negative at w₀ = −1 and positive at w₀ = 0 whenever Ω_c > 0: every real
//! root lies in [−1, 0] and at least one always exists.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{mean_field_rhs, Eq3Variant, MeanFieldState};
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Ramp steps used to follow the physical branch when the cubic has several
/// roots in [−1, 0].
pub const HOMOTOPY_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoefficients {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CubicCoefficients {
    pub fn eval(&self, w: f64) -> f64 {
        ((self.c3 * w + self.c2) * w + self.c1) * w + self.c0
    }

    pub fn derivative(&self, w: f64) -> f64 {
        (3.0 * self.c3 * w + 2.0 * self.c2) * w + self.c1
    }

    pub fn max_abs(&self) -> f64 {
        [self.c3, self.c2, self.c1, self.c0].iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// |cubic(w)| divided by the largest coefficient magnitude.
    pub fn normalized_residual(&self, w: f64) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            self.eval(w).abs() / scale
        }
    }

    /// All complex roots (companion-matrix eigenvalues), used for diagnostics.
    pub fn all_roots(&self) -> Vec<C64> {
        let coeffs = [self.c3, self.c2, self.c1, self.c0];
        let lead = coeffs.iter().position(|c| *c != 0.0);
        let Some(lead) = lead else { return Vec::new() };
        let degree = 3 - lead;
        if degree == 0 {
            return Vec::new();
        }
        let a = coeffs[lead];
        let mut m = nalgebra::DMatrix::<f64>::zeros(degree, degree);
        for k in 0..degree {
            m[(0, k)] = -coeffs[lead + 1 + k] / a;
        }
        for k in 1..degree {
            m[(k, k - 1)] = 1.0;
        }
        m.complex_eigenvalues().iter().copied().collect()
    }
}

/// Expands the steady-state condition into c3·w³ + c2·w² + c1·w + c0.
pub fn cubic_coefficients(p: &ModelParams) -> CubicCoefficients {
    let a = p.coupling_sq();
    let b = p.gamma2 * p.kappa_m - 2.0 * p.delta_c * p.delta_m;
    let d = p.delta_m * p.delta_m + 0.25 * p.kappa_m * p.kappa_m;
    let c = (p.delta_c * p.delta_c + p.gamma2 * p.gamma2) * d;
    CubicCoefficients {
        c3: p.gamma1 * a * a,
        c2: p.gamma1 * a * (a - b),
        c1: p.gamma1 * (c - a * b) + 4.0 * p.omega_c_rabi_sq * p.gamma2 * d,
        c0: p.gamma1 * c,
    }
}

/// Selected population inversion together with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionRoot {
    pub w0: f64,
    pub residual: f64,
    /// Distinct real roots found in [−1, 0], ascending.
    pub physical_roots: Vec<f64>,
}

impl InversionRoot {
    pub fn is_multistable(&self) -> bool {
        self.physical_roots.len() > 1
    }
}

/// Real roots of the cubic inside [lo, hi], ascending. The interval is cut at
/// the critical points so each piece is monotone, then every sign change is
/// bracketed and refined.
fn roots_in_interval(c: &CubicCoefficients, lo: f64, hi: f64) -> Vec<f64> {
    let mut cuts = vec![lo];
    // critical points: 3c3 w² + 2c2 w + c1 = 0
    let (qa, qb, qc) = (3.0 * c.c3, 2.0 * c.c2, c.c1);
    let mut crit = Vec::new();
    if qa != 0.0 {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let q = -0.5 * (qb + qb.signum() * disc.sqrt());
            if q != 0.0 {
                crit.push(q / qa);
                crit.push(qc / q);
            } else {
                crit.push(0.0);
            }
        }
    } else if qb != 0.0 {
        crit.push(-qc / qb);
    }
    crit.sort_by(f64::total_cmp);
    cuts.extend(crit.into_iter().filter(|x| *x > lo && *x < hi));
    cuts.push(hi);

    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|last| (r - last).abs() > 1e-13) {
            roots.push(r);
        }
    };
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (fa, fb) = (c.eval(a), c.eval(b));
        if fa == 0.0 {
            push(a, &mut roots);
        }
        if fa * fb < 0.0 {
            push(refine_bracketed(c, a, b, fa), &mut roots);
        }
        if fb == 0.0 {
            push(b, &mut roots);
        }
    }
    roots
}

/// Safeguarded Newton iteration inside a sign-change bracket, finishing with
/// Newton polishing until the step stops shrinking.
fn refine_bracketed(c: &CubicCoefficients, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let rising = fa < 0.0;
    let mut w = 0.5 * (a + b);
    for _ in 0..200 {
        let fw = c.eval(w);
        if fw == 0.0 {
            return w;
        }
        if (fw < 0.0) == rising {
            a = w;
        } else {
            b = w;
        }
        let dw = c.derivative(w);
        let newton = w - fw / dw;
        w = if dw != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (b - a).abs() <= 4.0 * f64::EPSILON * w.abs().max(1e-300) {
            break;
        }
    }
    polish(c, w)
}

fn polish(c: &CubicCoefficients, mut w: f64) -> f64 {
    let mut best = (c.eval(w).abs(), w);
    for _ in 0..8 {
        let dw = c.derivative(w);
        if dw == 0.0 {
            break;
        }
        let next = w - c.eval(w) / dw;
        let r = c.eval(next).abs();
        if r < best.0 {
            best = (r, next);
            w = next;
        } else {
            break;
        }
    }
    best.1
}

/// Solves for the population inversion. With several roots in [−1, 0] the
/// root reached by ramping Ω_c² up from zero (where w₀ = −1) is returned.
pub fn solve_population_inversion(p: &ModelParams) -> Result<InversionRoot> {
    let p = p.validated()?;
    let coeffs = cubic_coefficients(&p);
    // Without pump the cubic factors as (w + 1)·|A w − …|², so the ground
    // state is the only physical root; skip the rounding in F(−1).
    let physical = if p.omega_c_rabi_sq == 0.0 { vec![-1.0] } else { roots_in_interval(&coeffs, -1.0, 0.0) };
    let w0 = match physical.len() {
        0 => {
            let roots = coeffs.all_roots().into_iter().map(|z| (z.re, z.im)).collect();
            return Err(Error::NoPhysicalRoot { roots });
        }
        1 => physical[0],
        _ => follow_branch(&p, &physical)?,
    };
    Ok(InversionRoot { w0, residual: coeffs.normalized_residual(w0), physical_roots: physical })
}

fn follow_branch(p: &ModelParams, target_roots: &[f64]) -> Result<f64> {
    let mut w = -1.0;
    for k in 1..HOMOTOPY_STEPS {
        let ramp = ModelParams {
            omega_c_rabi_sq: p.omega_c_rabi_sq * k as f64 / HOMOTOPY_STEPS as f64,
            ..*p
        };
        let roots = roots_in_interval(&cubic_coefficients(&ramp), -1.0, 0.0);
        w = nearest(&roots, w).ok_or_else(|| Error::NoPhysicalRoot { roots: Vec::new() })?;
    }
    nearest(target_roots, w).ok_or_else(|| Error::NoPhysicalRoot { roots: Vec::new() })
}

fn nearest(roots: &[f64], to: f64) -> Option<f64> {
    roots.iter().copied().min_by(|a, b| (a - to).abs().total_cmp(&(b - to).abs()))
}

/// Steady coherence S₀ and Majorana amplitude f₀ for a given inversion.
pub fn steady_amplitudes(p: &ModelParams, w0: f64) -> Result<(C64, C64)> {
    let i = C64::i();
    let g = C64::new(p.beta1, p.beta2);
    let f_denominator = i * p.delta_m + 0.5 * p.kappa_m;
    if f_denominator.norm() == 0.0 {
        return Err(Error::Singularity("Majorana amplitude"));
    }
    let s_denominator = i * p.delta_c + p.gamma2 - w0 * p.coupling_sq() / f_denominator;
    if s_denominator.norm() == 0.0 {
        return Err(Error::Singularity("exciton coherence"));
    }
    let s0 = -i * p.omega_c() * w0 / s_denominator;
    let f0 = g * s0 / f_denominator;
    Ok((s0, f0))
}

/// Complete steady state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub w0: f64,
    pub s0: C64,
    pub f0: C64,
    /// Normalized cubic residual at w0.
    pub residual: f64,
    /// Number of distinct real roots in [−1, 0]; more than one means the
    /// returned state was selected by continuation.
    pub multiplicity: usize,
}

impl SteadyState {
    pub fn mean_field(&self) -> MeanFieldState {
        MeanFieldState { sz: C64::new(0.5 * self.w0, 0.0), sm: self.s0, f: self.f0 }
    }
}

pub fn steady_state(p: &ModelParams) -> Result<SteadyState> {
    let root = solve_population_inversion(p)?;
    let (s0, f0) = steady_amplitudes(p, root.w0)?;
    Ok(SteadyState {
        w0: root.w0,
        s0,
        f0,
        residual: root.residual,
        multiplicity: root.physical_roots.len(),
    })
}

/// Magnitudes of the time derivatives of (⟨Sᶻ⟩, ⟨S⁻⟩, ⟨f⟩) evaluated at the
/// steady state with the probe off.
pub fn stationary_residuals(p: &ModelParams, ss: &SteadyState, variant: Eq3Variant) -> [f64; 3] {
    let d = mean_field_rhs(p, variant, None, 0.0, &ss.mean_field());
    [d.sz.norm(), d.sm.norm(), d.f.norm()]
}
