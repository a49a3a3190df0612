//! Mean-field equations of motion for ⟨Sᶻ⟩, ⟨S⁻⟩ and ⟨f⟩ in the pump frame,
//! with the Langevin noise terms dropped.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::params::ModelParams;

/// Form of the dot–Majorana exchange term in the population equation.
///
/// `AsPrinted` uses −β₁(S⁻f† + S⁺f) − iβ₂(S⁻f† + S⁺f), which does not keep
/// ⟨Sᶻ⟩ real. `Symmetrized` uses −β₁(S⁻f† + S⁺f) − iβ₂(S⁻f† − S⁺f), which is
/// what the commutator with the rotating-frame Hamiltonian produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Eq3Variant {
    AsPrinted,
    #[default]
    Symmetrized,
}

impl Eq3Variant {
    pub const ALL: [Eq3Variant; 2] = [Eq3Variant::AsPrinted, Eq3Variant::Symmetrized];

    pub fn name(self) -> &'static str {
        match self {
            Eq3Variant::AsPrinted => "as-printed",
            Eq3Variant::Symmetrized => "symmetrized",
        }
    }
}

/// Mean-field state: population ⟨Sᶻ⟩ (complex so the as-printed variant can
/// be represented), coherence ⟨S⁻⟩ and Majorana amplitude ⟨f⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldState {
    pub sz: C64,
    pub sm: C64,
    pub f: C64,
}

impl MeanFieldState {
    pub fn ground() -> Self {
        MeanFieldState { sz: C64::new(-0.5, 0.0), sm: C64::new(0.0, 0.0), f: C64::new(0.0, 0.0) }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.sz.re, self.sz.im, self.sm.re, self.sm.im, self.f.re, self.f.im]
    }

    pub fn from_slice(y: &[f64]) -> Self {
        MeanFieldState {
            sz: C64::new(y[0], y[1]),
            sm: C64::new(y[2], y[3]),
            f: C64::new(y[4], y[5]),
        }
    }
}

/// Weak probe drive μE_s/ħ at beat frequency δ = ω_s − ω_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeDrive {
    pub rabi: f64,
    pub delta: f64,
}

/// Right-hand side of the mean-field equations at time `t`.
pub fn mean_field_rhs(
    p: &ModelParams,
    variant: Eq3Variant,
    probe: Option<ProbeDrive>,
    t: f64,
    y: &MeanFieldState,
) -> MeanFieldState {
    let i = C64::i();
    let g = C64::new(p.beta1, p.beta2);
    let gc = g.conj();
    let omega = p.omega_c();
    let MeanFieldState { sz, sm, f } = *y;
    let sp = sm.conj();

    let exchange = match variant {
        Eq3Variant::Symmetrized => -(g * sm * f.conj()) - gc * sp * f,
        Eq3Variant::AsPrinted => -g * (sm * f.conj() + sp * f),
    };
    let mut dsz = -p.gamma1 * (sz + 0.5) + exchange + i * omega * (sp - sm);
    let mut dsm = -(i * p.delta_c + p.gamma2) * sm + 2.0 * gc * sz * f - 2.0 * i * omega * sz;
    let df = -(i * p.delta_m + 0.5 * p.kappa_m) * f + g * sm;

    if let Some(ProbeDrive { rabi, delta }) = probe {
        let rot = C64::from_polar(1.0, -delta * t);
        dsz += i * rabi * (sp * rot - sm * rot.conj());
        dsm -= 2.0 * i * rabi * sz * rot;
    }
    MeanFieldState { sz: dsz, sm: dsm, f: df }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_is_stationary_without_pump() {
        let p = ModelParams { omega_c_rabi_sq: 0.0, ..ModelParams::reference() };
        for variant in Eq3Variant::ALL {
            let d = mean_field_rhs(&p, variant, None, 0.0, &MeanFieldState::ground());
            assert_eq!(d.to_array(), [0.0; 6]);
        }
    }

    #[test]
    fn symmetrized_population_derivative_is_real() {
        let p = ModelParams::reference();
        let y = MeanFieldState {
            sz: C64::new(-0.3, 0.0),
            sm: C64::new(0.12, -0.07),
            f: C64::new(-0.4, 0.9),
        };
        let probe = Some(ProbeDrive { rabi: 1e-3, delta: 0.2 });
        let d = mean_field_rhs(&p, Eq3Variant::Symmetrized, probe, 3.7, &y);
        assert!(d.sz.im.abs() < 1e-17);
        let d = mean_field_rhs(&p, Eq3Variant::AsPrinted, probe, 3.7, &y);
        assert!(d.sz.im.abs() > 1e-3);
    }
}
