//! Frozen figure recipes and the checks run against them.
//!
//! Spectrum figures sweep one family (axis1) over the probe grid. Group-index
//! figures use axis1 for the curve family and axis2 for the abscissa.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{GroupIndexScale, ModelParams, ProbeGrid};
use crate::response::features::{detect_features, mirror_comparison, re_zero_crossings, SpectrumFeatures};
use crate::response::{secant_slope, Eq10Variant, Path};
use crate::steady::steady_state;
use crate::sweep::{run_sweep, Axis, Quantity, SweepResult, SweepSpec};

pub const FIGURE_IDS: [&str; 29] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig4a", "fig4b", "fig5a", "fig5b", "fig5c",
    "fig5d", "fig6a", "fig6b", "fig6c", "fig6d", "fig7a", "fig7b", "fig7c", "fig7d", "fig8", "fig9a", "fig9b",
    "fig10a", "fig10b", "fig10c", "fig10d",
];

/// β₂ family {0, β₁, 2β₁, 3β₁} at β₁ = 0.05 GHz.
pub const BETA2_FAMILY: [f64; 4] = [0.0, 0.05, 0.1, 0.15];
/// (β₁, β₂) pairs used for the mixed-coupling curves.
pub const COUPLING_PAIRS: [(f64, f64); 3] = [(0.05, 0.05), (0.07, 0.03), (0.09, 0.01)];
pub const POSITION_TOLERANCE: f64 = 0.05;
pub const SPLITTING_TOLERANCE: f64 = 0.1;
pub const DERIVATIVE_AGREEMENT: f64 = 1e-4;
const MIRROR_MAX_OFFSET: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureRecipe {
    pub id: String,
    pub title: String,
    pub spec: SweepSpec,
}

fn base(delta_c: f64, delta_m: f64) -> ModelParams {
    ModelParams { delta_c, delta_m, ..ModelParams::reference() }
}

fn spectrum_spec(base: ModelParams, axis1: Axis, grid: ProbeGrid) -> SweepSpec {
    SweepSpec {
        base,
        axis1,
        axis2: None,
        quantity: Quantity::Spectrum,
        grid,
        path: Path::LinearSystem,
        eq10: Eq10Variant::Derived,
        scale: GroupIndexScale::default(),
    }
}

fn group_spec(base: ModelParams, curves: Axis, abscissa: Axis) -> SweepSpec {
    SweepSpec {
        base,
        axis1: curves,
        axis2: Some(abscissa),
        quantity: Quantity::GroupIndex,
        grid: ProbeGrid::standard(),
        path: Path::LinearSystem,
        eq10: Eq10Variant::Derived,
        scale: GroupIndexScale::default(),
    }
}

fn beta2_family() -> Axis {
    Axis::new("beta2", BETA2_FAMILY.to_vec())
}

fn coupling_pairs() -> Axis {
    Axis::new("beta1", COUPLING_PAIRS.iter().map(|p| p.0).collect())
        .with_companion("beta2", COUPLING_PAIRS.iter().map(|p| p.1).collect())
}

fn beta1_grid() -> Axis {
    Axis::linspace("beta1", 0.005, 0.2, 80)
}

fn pump_grid() -> Axis {
    Axis::linspace("omega_c_rabi_sq", 0.0005, 0.02, 40)
}

fn detail_grid() -> ProbeGrid {
    ProbeGrid::new(-1.0, 1.0, 2001).expect("valid grid")
}

const DETUNING_SERIES: [f64; 7] = [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5];

/// Recipe for a figure panel.
pub fn recipe(id: &str) -> Result<FigureRecipe> {
    let std_grid = ProbeGrid::standard();
    let (title, spec) = match id {
        "fig2a" | "fig2b" => ("absorption/dispersion, β₂ family, Δc = Δ_M = 0", spectrum_spec(base(0.0, 0.0), beta2_family(), std_grid)),
        "fig2c" | "fig2d" => ("absorption/dispersion, (β₁, β₂) pairs, Δc = Δ_M = 0", spectrum_spec(base(0.0, 0.0), coupling_pairs(), std_grid)),
        "fig3a" | "fig3c" => ("absorption/dispersion, β₂ family, Δc = 0.5, Δ_M = 0", spectrum_spec(base(0.5, 0.0), beta2_family(), std_grid)),
        "fig3b" | "fig3d" => ("detail near Δs = 0, Δc = 0.5, Δ_M = 0", spectrum_spec(base(0.5, 0.0), beta2_family(), detail_grid())),
        "fig4a" => (
            "n_g vs β₁, β₂ ∈ {0, 0.1}, Δc = Δ_M = 0",
            group_spec(base(0.0, 0.0), Axis::new("beta2", vec![0.0, 0.1]), beta1_grid()),
        ),
        "fig4b" => (
            "n_g vs β₁, β₂ ∈ {0, 0.1}, Δc = 0.5, Δ_M = 0",
            group_spec(base(0.5, 0.0), Axis::new("beta2", vec![0.0, 0.1]), beta1_grid()),
        ),
        "fig5a" | "fig5c" => ("absorption/dispersion, β₂ family, Δc = 0, Δ_M = −0.5", spectrum_spec(base(0.0, -0.5), beta2_family(), std_grid)),
        "fig5b" | "fig5d" => ("detail, Δc = 0, Δ_M = −0.5", spectrum_spec(base(0.0, -0.5), beta2_family(), detail_grid())),
        "fig6a" => (
            "n_g vs β₁, β₂ ∈ {0, 0.1}, Δc = 0, Δ_M = −0.5",
            group_spec(base(0.0, -0.5), Axis::new("beta2", vec![0.0, 0.1]), beta1_grid()),
        ),
        "fig6b" => (
            "n_g vs Ω_pu², β₁ = 0.05, β₂ = 0, Δc = 0, Δ_M = −0.5",
            group_spec(ModelParams { beta2: 0.0, ..base(0.0, -0.5) }, Axis::new("beta1", vec![0.05]), pump_grid()),
        ),
        "fig6c" => ("n_g vs Ω_pu², (β₁, β₂) pairs, Δc = 0, Δ_M = −0.5", group_spec(base(0.0, -0.5), coupling_pairs(), pump_grid())),
        "fig6d" => (
            "absorption/dispersion, β₂ = 5β₁, Δc = 0, Δ_M = −0.5",
            spectrum_spec(base(0.0, -0.5), Axis::new("beta2", vec![0.25]), std_grid),
        ),
        "fig7a" | "fig7c" => ("absorption/dispersion, β₂ family, Δc = 0.5, Δ_M = −0.5", spectrum_spec(base(0.5, -0.5), beta2_family(), std_grid)),
        "fig7b" | "fig7d" => ("detail, Δc = 0.5, Δ_M = −0.5", spectrum_spec(base(0.5, -0.5), beta2_family(), detail_grid())),
        "fig8" => (
            "absorption for seven Δc at Δ_M = −0.5",
            spectrum_spec(base(0.0, -0.5), Axis::new("delta_c", DETUNING_SERIES.to_vec()), std_grid),
        ),
        "fig9a" => (
            "absorption for seven Δ_M at Δc = 0.5",
            spectrum_spec(base(0.5, 0.0), Axis::new("delta_m", DETUNING_SERIES.to_vec()), std_grid),
        ),
        "fig9b" => (
            "absorption for seven Δ_M at Δc = −0.5",
            spectrum_spec(base(-0.5, 0.0), Axis::new("delta_m", DETUNING_SERIES.to_vec()), std_grid),
        ),
        "fig10a" => (
            "n_g vs β₁, β₂ ∈ {0, 0.1}, Δc = 0.5, Δ_M = −0.5",
            group_spec(base(0.5, -0.5), Axis::new("beta2", vec![0.0, 0.1]), beta1_grid()),
        ),
        "fig10b" => (
            "n_g vs Ω_pu² for four Δc at Δ_M = −0.5",
            group_spec(base(0.0, -0.5), Axis::new("delta_c", vec![-1.0, -0.5, 0.5, 1.0]), pump_grid()),
        ),
        "fig10c" => (
            "n_g vs Ω_pu², Δ_M ∈ {−0.5, 0.5}, Δc = 0.5",
            group_spec(base(0.5, 0.0), Axis::new("delta_m", vec![-0.5, 0.5]), pump_grid()),
        ),
        "fig10d" => (
            "n_g vs Ω_pu², Δ_M ∈ {−0.5, 0.5}, Δc = −0.5",
            group_spec(base(-0.5, 0.0), Axis::new("delta_m", vec![-0.5, 0.5]), pump_grid()),
        ),
        other => return Err(Error::UnknownFigure(other.to_string())),
    };
    Ok(FigureRecipe { id: id.to_string(), title: title.to_string(), spec })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    /// Measured and recorded, not asserted.
    Reported,
}

impl ClaimStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            ClaimStatus::Pass
        } else {
            ClaimStatus::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ClaimStatus::Pass => "pass",
            ClaimStatus::Fail => "FAIL",
            ClaimStatus::Reported => "reported",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub status: ClaimStatus,
    pub detail: String,
}

impl Claim {
    fn check(name: &str, ok: bool, detail: String) -> Self {
        Claim { name: name.to_string(), status: ClaimStatus::from_bool(ok), detail }
    }

    fn report(name: &str, detail: String) -> Self {
        Claim { name: name.to_string(), status: ClaimStatus::Reported, detail }
    }
}

/// Features of one spectrum cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub coords: Vec<(String, f64)>,
    pub features: Option<SpectrumFeatures>,
    pub error: Option<String>,
    /// Sign of the Re χ slope at Δs = 0 (central difference on the grid).
    pub dispersion_slope_at_zero: Option<f64>,
    /// Re χ zero crossing nearest the deepest dip.
    pub re_zero_near_dip: Option<f64>,
}

/// One group-index curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupIndexCurve {
    pub label: Vec<(String, f64)>,
    pub abscissa_field: String,
    pub abscissa: Vec<f64>,
    pub ng_over_pi: Vec<Option<f64>>,
    pub sign_pattern: String,
    /// Largest |Richardson − secant| / |Richardson| along the curve.
    pub max_secant_rel_err: f64,
    pub secant_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureReport {
    pub recipe: FigureRecipe,
    pub result: SweepResult,
    pub spectra: Vec<SpectrumSummary>,
    pub curves: Vec<GroupIndexCurve>,
    pub claims: Vec<Claim>,
}

impl FigureReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.status != ClaimStatus::Fail)
    }
}

fn summarize_spectra(result: &SweepResult) -> Vec<SpectrumSummary> {
    result
        .cells
        .iter()
        .map(|cell| {
            let Some(points) = cell.spectrum() else {
                let error = cell.outcome.as_ref().err().map(|e| e.message.clone());
                return SpectrumSummary { coords: cell.coords.clone(), features: None, error, dispersion_slope_at_zero: None, re_zero_near_dip: None };
            };
            let (features, error) = match detect_features(points) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let centre = points.iter().position(|pt| pt.delta_s >= 0.0);
            let dispersion_slope_at_zero = centre.filter(|&k| k > 0 && k + 1 < points.len()).map(|k| {
                (points[k + 1].chi.re - points[k - 1].chi.re) / (points[k + 1].delta_s - points[k - 1].delta_s)
            });
            let re_zero_near_dip = features.as_ref().and_then(|f| f.deepest_dip).and_then(|dip| {
                re_zero_crossings(points)
                    .into_iter()
                    .min_by(|a, b| (a - dip.delta_s).abs().total_cmp(&(b - dip.delta_s).abs()))
            });
            SpectrumSummary { coords: cell.coords.clone(), features, error, dispersion_slope_at_zero, re_zero_near_dip }
        })
        .collect()
}

/// Run-length compressed signs, e.g. [+, +, −, +] → "+-+". Failed cells
/// appear as `?`.
pub fn sign_pattern(values: &[Option<f64>]) -> String {
    let mut out = String::new();
    for v in values {
        let c = match v {
            Some(x) if *x > 0.0 => '+',
            Some(x) if *x < 0.0 => '-',
            Some(_) => '0',
            None => '?',
        };
        if !out.ends_with(c) {
            out.push(c);
        }
    }
    out
}

fn summarize_curves(result: &SweepResult) -> Result<Vec<GroupIndexCurve>> {
    let spec = &result.spec;
    let Some(axis2) = &spec.axis2 else {
        return Ok(Vec::new());
    };
    let n2 = axis2.values.len();
    result
        .cells
        .chunks(n2)
        .map(|row| {
            let n_label = row[0].coords.len() - 1 - axis2.companions.len();
            let label = row[0].coords[..n_label].to_vec();
            let ng: Vec<Option<f64>> = row.iter().map(|c| c.group_index().map(|g| g.ng_over_pi)).collect();
            let mut max_err: f64 = 0.0;
            let mut failures = 0;
            for cell in row {
                let Some(g) = cell.group_index() else {
                    failures += 1;
                    continue;
                };
                let secant = steady_state(&cell.params).and_then(|ss| secant_slope(&cell.params, &ss));
                match secant {
                    Ok(s) => max_err = max_err.max(secant_rel_err(g.derivative_estimate, s)),
                    Err(_) => failures += 1,
                }
            }
            Ok(GroupIndexCurve {
                label,
                abscissa_field: axis2.field.clone(),
                abscissa: axis2.values.clone(),
                sign_pattern: sign_pattern(&ng),
                ng_over_pi: ng,
                max_secant_rel_err: max_err,
                secant_failures: failures,
            })
        })
        .collect()
}

pub fn secant_rel_err(richardson: f64, secant: f64) -> f64 {
    (richardson - secant).abs() / richardson.abs().max(f64::MIN_POSITIVE)
}

fn fmt_coords(coords: &[(String, f64)]) -> String {
    coords.iter().map(|(f, v)| format!("{f}={v}")).collect::<Vec<_>>().join(" ")
}

fn opt(v: Option<f64>) -> String {
    v.map_or("none".into(), |x| format!("{x:.4}"))
}

/// Runs a recipe, summarizes it and evaluates its checks.
pub fn figure(id: &str, workers: usize) -> Result<FigureReport> {
    let recipe = recipe(id)?;
    let result = run_sweep(&recipe.spec, workers)?;
    let spectra = if recipe.spec.quantity == Quantity::Spectrum { summarize_spectra(&result) } else { Vec::new() };
    let curves = summarize_curves(&result)?;
    let mut claims = Vec::new();
    match id {
        "fig2a" => {
            claims.extend(spectra.iter().map(symmetric_splitting));
            claims.push(splitting_monotone(&spectra));
        }
        "fig2b" | "fig2d" | "fig3c" | "fig3d" | "fig5c" | "fig5d" | "fig7c" | "fig7d" => {
            for s in &spectra {
                claims.push(Claim::report(
                    "dispersion slope at Δs = 0",
                    format!("{}: dRe χ/dΔs = {}", fmt_coords(&s.coords), opt(s.dispersion_slope_at_zero)),
                ));
            }
        }
        "fig3a" => claims.extend(spectra.iter().map(fano_at_zero)),
        "fig5a" => claims.extend(spectra.iter().map(|s| dip_at(s, -0.5))),
        "fig7a" => claims.extend(spectra.iter().map(|s| splitting_equals(s, 1.0))),
        "fig8" => {
            let resonant = spectra.iter().find(|s| s.coords[0].1 == -0.5).expect("Δc = −0.5 member");
            claims.push(lorentzian_at_resonance(resonant));
            for s in &spectra {
                let dip = s.features.as_ref().and_then(|f| f.deepest_dip).map(|d| d.delta_s);
                claims.push(Claim::report("dip position", format!("{}: deepest dip at Δs = {}", fmt_coords(&s.coords), opt(dip))));
            }
            let near = spectra
                .iter()
                .filter(|s| s.features.as_ref().and_then(|f| f.deepest_dip).is_some_and(|d| (d.delta_s + 1.0).abs() <= POSITION_TOLERANCE))
                .count();
            claims.push(Claim::report(
                "transparency windows at Δs = −1.0",
                format!("{near} of {} spectra have their deepest dip within ±{POSITION_TOLERANCE} of −1.0", spectra.len()),
            ));
        }
        "fig9a" | "fig9b" => claims.extend(mirror_claims(workers)?),
        "fig4a" => claims.extend(sign_claims(&curves, |_| "+-+")),
        "fig4b" => claims.extend(sign_claims(&curves, |_| "-+")),
        "fig6b" => claims.extend(sign_claims(&curves, |_| "+")),
        "fig10c" => claims.extend(sign_claims(&curves, |label| if label < 0.0 { "-+" } else { "+-" })),
        _ => {}
    }
    if recipe.spec.quantity == Quantity::GroupIndex {
        for c in &curves {
            if !matches!(id, "fig4a" | "fig4b" | "fig6b" | "fig10c") {
                claims.push(Claim::report("sign pattern", format!("{}: {}", fmt_coords(&c.label), c.sign_pattern)));
            }
        }
        claims.push(derivative_claim(&curves));
    }
    if recipe.spec.quantity == Quantity::Spectrum && claims.is_empty() {
        for s in &spectra {
            claims.push(Claim::report("features", spectrum_line(s)));
        }
    }
    Ok(FigureReport { recipe, result, spectra, curves, claims })
}

pub fn spectrum_line(s: &SpectrumSummary) -> String {
    match &s.features {
        Some(f) => format!(
            "{}: peaks at [{}], deepest dip {}, splitting {}, asymmetry {}",
            fmt_coords(&s.coords),
            f.peaks.iter().map(|p| format!("{:.4}", p.delta_s)).collect::<Vec<_>>().join(", "),
            opt(f.deepest_dip.map(|d| d.delta_s)),
            opt(f.splitting),
            opt(f.asymmetry),
        ),
        None => format!("{}: {}", fmt_coords(&s.coords), s.error.as_deref().unwrap_or("no features")),
    }
}

fn symmetric_splitting(s: &SpectrumSummary) -> Claim {
    let name = "symmetric splitting";
    let Some(f) = &s.features else {
        return Claim::check(name, false, spectrum_line(s));
    };
    let asym = f.asymmetry;
    let dip = f.dip_near(0.0).copied();
    let symmetric = asym.is_some_and(|a| a.abs() < 0.02);
    let dip_ok = dip.is_some_and(|d| d.delta_s.abs() <= POSITION_TOLERANCE && d.height < 0.02 * f.max_im);
    let detail = format!(
        "{}: asymmetry {}, dip at {} with Im χ / peak = {}",
        fmt_coords(&s.coords),
        opt(asym),
        opt(dip.map(|d| d.delta_s)),
        opt(dip.map(|d| d.height / f.max_im)),
    );
    Claim::check(name, symmetric && dip_ok, detail)
}

fn splitting_monotone(spectra: &[SpectrumSummary]) -> Claim {
    let splits: Vec<Option<f64>> = spectra.iter().map(|s| s.features.as_ref().and_then(|f| f.splitting)).collect();
    let ok = splits.iter().all(Option::is_some) && splits.windows(2).all(|w| w[1].unwrap() >= w[0].unwrap());
    let detail = splits.iter().map(|s| opt(*s)).collect::<Vec<_>>().join(" ≤ ");
    Claim::check("splitting non-decreasing in β₂", ok, detail)
}

fn fano_at_zero(s: &SpectrumSummary) -> Claim {
    let name = "Fano dip near Δs = 0";
    let Some(f) = &s.features else {
        return Claim::check(name, false, spectrum_line(s));
    };
    let dip = f.deepest_dip.map(|d| d.delta_s);
    let ok = dip.is_some_and(|d| d.abs() <= POSITION_TOLERANCE) && f.asymmetry.is_some_and(|a| a.abs() > 0.05);
    Claim::check(name, ok, format!("{}: deepest dip at {}, asymmetry {}", fmt_coords(&s.coords), opt(dip), opt(f.asymmetry)))
}

fn dip_at(s: &SpectrumSummary, target: f64) -> Claim {
    let name = "transparency window position";
    let dip = s.features.as_ref().and_then(|f| f.deepest_dip).map(|d| d.delta_s);
    let ok = dip.is_some_and(|d| (d - target).abs() <= POSITION_TOLERANCE);
    Claim::check(name, ok, format!("{}: deepest dip at {} (expected {target} ± {POSITION_TOLERANCE})", fmt_coords(&s.coords), opt(dip)))
}

fn splitting_equals(s: &SpectrumSummary, target: f64) -> Claim {
    let split = s.features.as_ref().and_then(|f| f.splitting);
    let ok = split.is_some_and(|d| (d - target).abs() <= SPLITTING_TOLERANCE);
    Claim::check(
        "splitting = Δc − Δ_M",
        ok,
        format!("{}: splitting {} (expected {target} ± {SPLITTING_TOLERANCE})", fmt_coords(&s.coords), opt(split)),
    )
}

fn lorentzian_at_resonance(s: &SpectrumSummary) -> Claim {
    let asym = s.features.as_ref().and_then(|f| f.asymmetry);
    Claim::check(
        "symmetric peak at Δc = Δ_M",
        asym.is_some_and(|a| a.abs() < 0.05),
        format!("{}: asymmetry {}", fmt_coords(&s.coords), opt(asym)),
    )
}

fn mirror_claims(workers: usize) -> Result<Vec<Claim>> {
    let a = run_sweep(&recipe("fig9a")?.spec, workers)?;
    let b = run_sweep(&recipe("fig9b")?.spec, workers)?;
    let mut claims = Vec::new();
    for phi in [0.5, 1.0, 1.5] {
        let find = |r: &SweepResult, dm: f64| r.cells.iter().find(|c| c.params.delta_m == dm).and_then(|c| c.spectrum().map(<[_]>::to_vec));
        let name = "mirror symmetry";
        match (find(&a, phi), find(&b, -phi)) {
            (Some(sa), Some(sb)) => {
                let m = mirror_comparison(&sa, &sb, MIRROR_MAX_OFFSET)?;
                claims.push(Claim::check(
                    name,
                    m.mismatch < 0.05,
                    format!("Φ = {phi}: mismatch {:.3e} at offset s₀ = {:.4}", m.mismatch, m.offset),
                ));
            }
            _ => claims.push(Claim::check(name, false, format!("Φ = {phi}: spectrum unavailable"))),
        }
    }
    Ok(claims)
}

fn sign_claims<'a>(curves: &'a [GroupIndexCurve], expected: impl Fn(f64) -> &'static str + 'a) -> impl Iterator<Item = Claim> + 'a {
    curves.iter().map(move |c| {
        let want = expected(c.label[0].1);
        Claim::check(
            "group-index sign pattern",
            c.sign_pattern == want,
            format!("{}: {} (expected {want})", fmt_coords(&c.label), c.sign_pattern),
        )
    })
}

fn derivative_claim(curves: &[GroupIndexCurve]) -> Claim {
    let worst = curves.iter().map(|c| c.max_secant_rel_err).fold(0.0, f64::max);
    let failures: usize = curves.iter().map(|c| c.secant_failures).sum();
    Claim::check(
        "Richardson vs secant (step Γ₂/200)",
        worst < DERIVATIVE_AGREEMENT && failures == 0,
        format!("max relative difference {worst:.3e}, {failures} cells without a comparison"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_id_has_a_recipe() {
        for id in FIGURE_IDS {
            let r = recipe(id).unwrap();
            r.spec.validate().unwrap();
        }
        assert!(matches!(recipe("fig11"), Err(Error::UnknownFigure(_))));
    }

    #[test]
    fn recipe_family_values() {
        let fig8 = recipe("fig8").unwrap().spec;
        assert_eq!(fig8.axis1.values, vec![-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5]);
        assert_eq!(fig8.base.delta_m, -0.5);
        let fig2c = recipe("fig2c").unwrap().spec;
        let pairs: Vec<(f64, f64)> = (0..fig2c.len()).map(|k| fig2c.cell(k).unwrap().1).map(|p| (p.beta1, p.beta2)).collect();
        assert_eq!(pairs, vec![(0.05, 0.05), (0.07, 0.03), (0.09, 0.01)]);
        let fig6b = recipe("fig6b").unwrap().spec;
        let (_, first) = fig6b.cell(0).unwrap();
        assert_eq!((first.beta1, first.beta2, first.delta_c, first.delta_m), (0.05, 0.0, 0.0, -0.5));
        assert_eq!(fig6b.len(), 40);
        assert_eq!(recipe("fig4a").unwrap().spec.len(), 160);
    }

    #[test]
    fn sign_patterns_compress() {
        let v = [Some(1.0), Some(2.0), Some(-1.0), None, Some(3.0), Some(4.0)];
        assert_eq!(sign_pattern(&v), "+-?+");
        assert_eq!(sign_pattern(&[]), "");
    }

    #[test]
    fn fig2a_symmetric_splitting() {
        let r = figure("fig2a", 2).unwrap();
        let claims: Vec<_> = r.claims.iter().filter(|c| c.name == "symmetric splitting").collect();
        assert_eq!(claims.len(), 4);
        for claim in claims {
            assert_eq!(claim.status, ClaimStatus::Pass, "{}", claim.detail);
        }
    }
}
