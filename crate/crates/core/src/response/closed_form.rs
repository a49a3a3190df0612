//! Closed-form susceptibility obtained by eliminating the Majorana and
//! population sidebands, leaving a 2×2 system in (S₊, S₋*).
//!
//! The original auxiliary list has three irregularities relative to a direct
//! elimination of the sideband equations: Π₂ is built from f₀ instead of f₀*, Λ₄ contains (β₁+iβ₂)ε₁
//! where the conjugate Majorana sideband requires (β₁+iβ₂)ε₂*, and the Π₂ε₃
//! term of Λ₄ enters with the wrong sign. [`Eq10Variant`] selects between the
//! original list, the ε₂ substitution, and the fully re-derived form.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::steady::SteadyState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Eq10Variant {
    /// Original list: Λ₄ with ε₁.
    #[serde(rename = "eps1")]
    Lambda4Eps1,
    /// Λ₄ with ε₂ in place of ε₁.
    #[serde(rename = "eps2")]
    Lambda4Eps2,
    /// Π₂ = Π₁*, Λ₄ = −i(Δc+δ) + Γ₂ − w₀(β₁+iβ₂)ε₂* − Π₂ε₃.
    #[default]
    Derived,
}

impl Eq10Variant {
    pub const ALL: [Eq10Variant; 3] =
        [Eq10Variant::Lambda4Eps1, Eq10Variant::Lambda4Eps2, Eq10Variant::Derived];

    pub fn name(self) -> &'static str {
        match self {
            Eq10Variant::Lambda4Eps1 => "eps1",
            Eq10Variant::Lambda4Eps2 => "eps2",
            Eq10Variant::Derived => "derived",
        }
    }
}

/// Intermediate quantities of the closed form at one probe detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxiliaryBlock {
    pub pi1: C64,
    pub pi2: C64,
    pub eps: [C64; 8],
    pub lambda: [C64; 4],
}

impl AuxiliaryBlock {
    pub fn new(p: &ModelParams, ss: &SteadyState, delta: f64, variant: Eq10Variant) -> Self {
        let i = C64::i();
        let g = C64::new(p.beta1, p.beta2);
        let gc = g.conj();
        let omega = p.omega_c();
        let (w0, s0, f0) = (ss.w0, ss.s0, ss.f0);
        let half_kappa = 0.5 * p.kappa_m;

        let pi1 = 2.0 * (gc * f0 - i * omega);
        let pi2 = match variant {
            Eq10Variant::Derived => pi1.conj(),
            _ => 2.0 * (g * f0 + i * omega),
        };
        let e1 = g / (i * (p.delta_m - delta) + half_kappa);
        let e2 = g / (i * (p.delta_m + delta) + half_kappa);
        let lower = C64::new(p.gamma1, -delta);
        let upper = C64::new(p.gamma1, delta);
        let e3 = (i * omega - gc * f0 - g * s0 * e2.conj()) / lower;
        let e4 = (i * omega + g * f0.conj() + gc * s0.conj() * e1) / lower;
        let e5 = (i * omega - gc * f0 - g * s0 * e1.conj()) / upper;
        let e6 = (i * omega + g * f0.conj() + gc * s0.conj() * e2) / upper;
        let e7 = i * s0.conj() / lower;
        let e8 = i * s0 / upper;

        let minus = C64::new(p.gamma2, p.delta_c - delta);
        let plus = C64::new(p.gamma2, -(p.delta_c + delta));
        let l1 = minus - w0 * gc * e1 + pi1 * e4;
        let l2 = minus.conj() - w0 * g * e1.conj() - pi2 * e5;
        let l3 = plus.conj() - w0 * gc * e2 + pi1 * e6;
        let l4 = match variant {
            Eq10Variant::Lambda4Eps1 => plus - w0 * g * e1 + pi2 * e3,
            Eq10Variant::Lambda4Eps2 => plus - w0 * g * e2 + pi2 * e3,
            Eq10Variant::Derived => plus - w0 * g * e2.conj() - pi2 * e3,
        };
        AuxiliaryBlock { pi1, pi2, eps: [e1, e2, e3, e4, e5, e6, e7, e8], lambda: [l1, l2, l3, l4] }
    }
}

/// χ⁽¹⁾ at probe–pump detuning δ from the closed form.
pub fn chi1_closed_form(
    p: &ModelParams,
    ss: &SteadyState,
    delta: f64,
    variant: Eq10Variant,
) -> Result<C64> {
    let aux = AuxiliaryBlock::new(p, ss, delta, variant);
    let AuxiliaryBlock { pi1, pi2, eps, lambda, .. } = aux;
    let (e3, e4, e7) = (eps[2], eps[3], eps[6]);
    let (l1, l4) = (lambda[0], lambda[3]);
    let denominator = l1 * l4 + pi1 * pi2 * e3 * e4;
    if denominator.norm() == 0.0 {
        return Err(Error::Singularity("closed-form susceptibility"));
    }
    let numerator = (e7 * pi1 * (l4 + e3 * pi2) - C64::i() * ss.w0 * l4) * p.gamma2;
    Ok(numerator / denominator)
}
