//! Physical parameters, probe grids and validation.
//!
//! Units: ħ = 1, every rate, detuning and coupling is a frequency in GHz and
//! times are in ns. The pump Rabi frequency is stored squared (GHz²) because
//! that is the knob swept in the figures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model parameters of the driven dot coupled to the Majorana pair, in the
/// frame rotating at the pump frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Exciton–pump detuning Δc = ω_e − ω_c.
    pub delta_c: f64,
    /// Majorana–pump detuning Δ_M = ω_M − ω_c.
    pub delta_m: f64,
    /// Dot–Majorana coupling to γ₁.
    pub beta1: f64,
    /// Dot–Majorana coupling to γ₂.
    pub beta2: f64,
    /// Exciton relaxation rate Γ₁.
    pub gamma1: f64,
    /// Exciton dephasing rate Γ₂.
    pub gamma2: f64,
    /// Majorana mode decay rate κ_M.
    pub kappa_m: f64,
    /// Squared pump Rabi frequency Ω_c².
    pub omega_c_rabi_sq: f64,
}

impl ModelParams {
    /// Names accepted by [`ModelParams::get`] and [`ModelParams::set`], in
    /// declaration order.
    pub const FIELDS: [&'static str; 8] = [
        "delta_c",
        "delta_m",
        "beta1",
        "beta2",
        "gamma1",
        "gamma2",
        "kappa_m",
        "omega_c_rabi_sq",
    ];

    /// Reference parameter set: β₁ = β₂ = 0.05 GHz, κ_M = 0.1 MHz,
    /// Γ₁ = 0.3 GHz, Γ₂ = 0.15 GHz, Ω_c² = 0.005 GHz², both detunings zero.
    pub fn reference() -> Self {
        ModelParams {
            delta_c: 0.0,
            delta_m: 0.0,
            beta1: 0.05,
            beta2: 0.05,
            gamma1: 0.3,
            gamma2: 0.15,
            kappa_m: 1e-4,
            omega_c_rabi_sq: 0.005,
        }
    }

    /// Pump Rabi frequency Ω_c (non-negative root of the stored square).
    pub fn omega_c(&self) -> f64 {
        self.omega_c_rabi_sq.max(0.0).sqrt()
    }

    /// |β₁ + iβ₂|².
    pub fn coupling_sq(&self) -> f64 {
        self.beta1 * self.beta1 + self.beta2 * self.beta2
    }

    pub fn get(&self, field: &str) -> Option<f64> {
        Some(match field {
            "delta_c" => self.delta_c,
            "delta_m" => self.delta_m,
            "beta1" => self.beta1,
            "beta2" => self.beta2,
            "gamma1" => self.gamma1,
            "gamma2" => self.gamma2,
            "kappa_m" => self.kappa_m,
            "omega_c_rabi_sq" => self.omega_c_rabi_sq,
            _ => return None,
        })
    }

    pub fn set(&mut self, field: &str, value: f64) -> Result<()> {
        let slot = match field {
            "delta_c" => &mut self.delta_c,
            "delta_m" => &mut self.delta_m,
            "beta1" => &mut self.beta1,
            "beta2" => &mut self.beta2,
            "gamma1" => &mut self.gamma1,
            "gamma2" => &mut self.gamma2,
            "kappa_m" => &mut self.kappa_m,
            "omega_c_rabi_sq" => &mut self.omega_c_rabi_sq,
            other => return Err(Error::Spec(format!("unknown parameter field `{other}`"))),
        };
        *slot = value;
        Ok(())
    }

    pub fn with(mut self, field: &str, value: f64) -> Result<Self> {
        self.set(field, value)?;
        Ok(self)
    }

    /// Largest frequency scale used to normalize stationary residuals.
    pub fn residual_scale(&self) -> f64 {
        [self.gamma1, self.gamma2, self.delta_c.abs(), self.delta_m.abs(), 1.0]
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Returns `self` if every invariant holds, otherwise a validation error
    /// listing each violation.
    pub fn validated(self) -> Result<Self> {
        let report = validate_params(&self);
        if report.is_ok() {
            Ok(self)
        } else {
            Err(Error::Validation(report.messages()))
        }
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::reference()
    }
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(|v| v.message.clone()).collect()
    }
}

/// Checks every parameter invariant without touching the input.
pub fn validate_params(p: &ModelParams) -> ValidationReport {
    let mut violations = Vec::new();
    for name in ModelParams::FIELDS {
        let value = p.get(name).expect("listed field");
        if !value.is_finite() {
            violations.push(Violation { field: name, message: format!("{name} must be finite") });
            continue;
        }
        let message = match name {
            "gamma1" | "gamma2" | "kappa_m" if value <= 0.0 => format!("{name} must be > 0"),
            "beta1" | "beta2" | "omega_c_rabi_sq" if value < 0.0 => format!("{name} must be ≥ 0"),
            _ => continue,
        };
        violations.push(Violation { field: name, message });
    }
    ValidationReport { violations }
}

/// Majorana splitting energy ε_M = prefactor · exp(−l/ξ) for a wire of length
/// `l` and superconducting coherence length `xi` (same length units).
pub fn majorana_splitting(l: f64, xi: f64, prefactor: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::Domain(format!("coherence length must be > 0, got {xi}")));
    }
    if !(l >= 0.0) {
        return Err(Error::Domain(format!("wire length must be ≥ 0, got {l}")));
    }
    if !(prefactor >= 0.0) {
        return Err(Error::Domain(format!("prefactor must be ≥ 0, got {prefactor}")));
    }
    Ok(prefactor * (-l / xi).exp())
}

/// Uniform probe-detuning grid Δs = ω_s − ω_e, endpoints inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeGrid {
    pub delta_s_min: f64,
    pub delta_s_max: f64,
    pub n_points: usize,
}

impl ProbeGrid {
    pub fn new(delta_s_min: f64, delta_s_max: f64, n_points: usize) -> Result<Self> {
        let grid = ProbeGrid { delta_s_min, delta_s_max, n_points };
        grid.validate()?;
        Ok(grid)
    }

    /// Δs ∈ [−3, 3] GHz with 2001 points.
    pub fn standard() -> Self {
        ProbeGrid { delta_s_min: -3.0, delta_s_max: 3.0, n_points: 2001 }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !self.delta_s_min.is_finite() || !self.delta_s_max.is_finite() {
            problems.push("grid bounds must be finite".to_string());
        } else if !(self.delta_s_min < self.delta_s_max) {
            problems.push("delta_s_min must be < delta_s_max".to_string());
        }
        if self.n_points < 2 {
            problems.push("n_points must be ≥ 2".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub fn step(&self) -> f64 {
        (self.delta_s_max - self.delta_s_min) / (self.n_points - 1) as f64
    }

    /// Grid points in ascending order. A grid symmetric about zero yields
    /// points that are exact negatives of each other.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| {
                let i = i as f64;
                (self.delta_s_min * (last - i) + self.delta_s_max * i) / last
            })
            .collect()
    }
}

impl Default for ProbeGrid {
    fn default() -> Self {
        Self::standard()
    }
}

/// Absolute scale Π of the group-velocity index; results are otherwise
/// reported in units of Π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupIndexScale {
    pub scale_pi: f64,
}

impl GroupIndexScale {
    pub fn new(scale_pi: f64) -> Result<Self> {
        if scale_pi.is_finite() && scale_pi > 0.0 {
            Ok(GroupIndexScale { scale_pi })
        } else {
            Err(Error::Validation(vec![format!("scale_pi must be > 0, got {scale_pi}")]))
        }
    }
}

impl Default for GroupIndexScale {
    fn default() -> Self {
        GroupIndexScale { scale_pi: 1.0 }
    }
}
