//! Linear probe response: two susceptibility paths, spectra, the group
//! velocity index and spectral feature extraction.

pub mod closed_form;
pub mod features;
pub mod group_index;
pub mod system;

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::{ModelParams, ProbeGrid};
use crate::steady::{steady_state, SteadyState};

pub use closed_form::{chi1_closed_form, AuxiliaryBlock, Eq10Variant};
pub use features::{detect_features, FeatureOptions, SpectrumFeatures};
pub use group_index::{group_index, group_index_with_state, secant_slope, GroupIndexResult};
pub use system::{chi1_linear_system, chi1_with_derivative};

/// Which susceptibility evaluator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    ClosedForm,
    #[default]
    LinearSystem,
}

impl Path {
    pub fn name(self) -> &'static str {
        match self {
            Path::ClosedForm => "closed_form",
            Path::LinearSystem => "linear_system",
        }
    }
}

/// χ⁽¹⁾ at probe–pump detuning δ on the chosen path.
pub fn chi1(
    p: &ModelParams,
    ss: &SteadyState,
    delta: f64,
    path: Path,
    variant: Eq10Variant,
) -> Result<C64> {
    match path {
        Path::ClosedForm => chi1_closed_form(p, ss, delta, variant),
        Path::LinearSystem => chi1_linear_system(p, ss, delta),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SusceptibilityPoint {
    /// Probe–exciton detuning Δs; the probe–pump detuning is δ = Δs + Δc.
    pub delta_s: f64,
    pub chi: C64,
}

/// Evaluates χ⁽¹⁾ over the grid, ascending in Δs.
pub fn spectrum(
    p: &ModelParams,
    grid: &ProbeGrid,
    path: Path,
    variant: Eq10Variant,
) -> Result<Vec<SusceptibilityPoint>> {
    grid.validate()?;
    let ss = steady_state(p)?;
    spectrum_with_state(p, &ss, &grid.points(), path, variant)
}

pub fn spectrum_with_state(
    p: &ModelParams,
    ss: &SteadyState,
    delta_s: &[f64],
    path: Path,
    variant: Eq10Variant,
) -> Result<Vec<SusceptibilityPoint>> {
    delta_s
        .iter()
        .map(|&ds| Ok(SusceptibilityPoint { delta_s: ds, chi: chi1(p, ss, ds + p.delta_c, path, variant)? }))
        .collect()
}

/// Writes `delta_s_ghz,re_chi,im_chi` rows with 17 significant digits and
/// LF line endings.
pub fn write_spectrum_csv<W: Write>(mut out: W, points: &[SusceptibilityPoint]) -> std::io::Result<()> {
    out.write_all(b"delta_s_ghz,re_chi,im_chi\n")?;
    for pt in points {
        writeln!(out, "{},{},{}", fmt_f64(pt.delta_s), fmt_f64(pt.chi.re), fmt_f64(pt.chi.im))?;
    }
    Ok(())
}

/// Full-precision scientific formatting used by every CSV writer.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Agreement of one closed-form variant with the linear system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantDivergence {
    pub variant: Eq10Variant,
    /// max |χ_closed − χ_linear| / max(1, |χ_linear|)
    pub max_rel_err: f64,
    pub worst_delta_s: f64,
    pub worst_label: String,
    pub agrees: bool,
}

/// Cross-path comparison over a collection of labelled spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub tolerance: f64,
    pub points_compared: usize,
    pub variants: Vec<VariantDivergence>,
    /// First variant (in declaration order) meeting the tolerance.
    pub selected: Option<Eq10Variant>,
}

pub const CROSS_PATH_TOLERANCE: f64 = 1e-8;

/// Compares every closed-form variant against the linear system at each
/// (label, params, Δs) triple.
pub fn divergence_report(cases: &[(String, ModelParams, Vec<f64>)]) -> Result<DivergenceReport> {
    let mut variants: Vec<VariantDivergence> = Eq10Variant::ALL
        .iter()
        .map(|&variant| VariantDivergence {
            variant,
            max_rel_err: 0.0,
            worst_delta_s: f64::NAN,
            worst_label: String::new(),
            agrees: true,
        })
        .collect();
    let mut points_compared = 0;
    for (label, p, delta_s) in cases {
        let ss = steady_state(p)?;
        for &ds in delta_s {
            let delta = ds + p.delta_c;
            let reference = chi1_linear_system(p, &ss, delta)?;
            points_compared += 1;
            for entry in variants.iter_mut() {
                let candidate = chi1_closed_form(p, &ss, delta, entry.variant)?;
                let err = (candidate - reference).norm() / reference.norm().max(1.0);
                if !(err <= entry.max_rel_err) {
                    entry.max_rel_err = err;
                    entry.worst_delta_s = ds;
                    entry.worst_label = label.clone();
                }
            }
        }
    }
    for entry in variants.iter_mut() {
        entry.agrees = entry.max_rel_err < CROSS_PATH_TOLERANCE;
    }
    let selected = variants.iter().find(|v| v.agrees).map(|v| v.variant);
    Ok(DivergenceReport { tolerance: CROSS_PATH_TOLERANCE, points_compared, variants, selected })
}
