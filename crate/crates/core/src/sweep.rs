//! Declarative one- and two-axis parameter sweeps evaluated on a worker pool.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ErrorClass, Result};
use crate::params::{GroupIndexScale, ModelParams, ProbeGrid};
use crate::response::group_index::group_index_with_state;
use crate::response::{fmt_f64, spectrum_with_state, Eq10Variant, GroupIndexResult, Path, SusceptibilityPoint};
use crate::steady::{steady_state, SteadyState};

/// Extra field stepped in lockstep with an axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Companion {
    pub field: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub field: String,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub companions: Vec<Companion>,
}

impl Axis {
    pub fn new(field: &str, values: Vec<f64>) -> Self {
        Axis { field: field.to_string(), values, companions: Vec::new() }
    }

    pub fn with_companion(mut self, field: &str, values: Vec<f64>) -> Self {
        self.companions.push(Companion { field: field.to_string(), values });
        self
    }

    /// `n` evenly spaced values from `lo` to `hi` inclusive.
    pub fn linspace(field: &str, lo: f64, hi: f64, n: usize) -> Self {
        let values = if n == 1 {
            vec![lo]
        } else {
            (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
        };
        Axis::new(field, values)
    }

    fn columns(&self) -> impl Iterator<Item = (&str, &[f64])> {
        std::iter::once((self.field.as_str(), self.values.as_slice()))
            .chain(self.companions.iter().map(|c| (c.field.as_str(), c.values.as_slice())))
    }

    fn validate(&self, name: &str, problems: &mut Vec<String>) {
        if self.values.is_empty() {
            problems.push(format!("{name}: needs at least one value"));
        }
        for (field, values) in self.columns() {
            if !ModelParams::FIELDS.contains(&field) {
                problems.push(format!("{name}: unknown field `{field}`"));
            }
            if values.iter().any(|v| !v.is_finite()) {
                problems.push(format!("{name}: non-finite value for `{field}`"));
            }
            if values.len() != self.values.len() {
                problems.push(format!("{name}: companion `{field}` has {} values, axis has {}", values.len(), self.values.len()));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Spectrum,
    GroupIndex,
    SteadyState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub axis1: Axis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis2: Option<Axis>,
    pub quantity: Quantity,
    #[serde(default)]
    pub grid: ProbeGrid,
    #[serde(default)]
    pub path: Path,
    #[serde(default)]
    pub eq10: Eq10Variant,
    #[serde(default)]
    pub scale: GroupIndexScale,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        self.axis1.validate("axis1", &mut problems);
        if let Some(axis2) = &self.axis2 {
            axis2.validate("axis2", &mut problems);
        }
        if self.quantity == Quantity::Spectrum {
            if let Err(e) = self.grid.validate() {
                problems.push(e.to_string());
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Spec(problems.join("; ")))
        }
    }

    /// Number of cells; axis2 varies fastest.
    pub fn len(&self) -> usize {
        self.axis1.values.len() * self.axis2.as_ref().map_or(1, |a| a.values.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis column values and parameters of cell `index` (row-major).
    pub fn cell(&self, index: usize) -> Result<(Vec<(String, f64)>, ModelParams)> {
        let n2 = self.axis2.as_ref().map_or(1, |a| a.values.len());
        let (i, j) = (index / n2, index % n2);
        let mut p = self.base;
        let mut coords = Vec::new();
        for (axis, k) in std::iter::once((&self.axis1, i)).chain(self.axis2.iter().map(|a| (a, j))) {
            for (field, values) in axis.columns() {
                p.set(field, values[k])?;
                coords.push((field.to_string(), values[k]));
            }
        }
        Ok((coords, p))
    }

    pub fn column_names(&self) -> Vec<String> {
        std::iter::once(&self.axis1)
            .chain(self.axis2.iter())
            .flat_map(|a| a.columns().map(|(f, _)| f.to_string()).collect::<Vec<_>>())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellValue {
    Spectrum(Vec<SusceptibilityPoint>),
    GroupIndex(GroupIndexResult),
    SteadyState(SteadyState),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellError {
    pub class: ErrorClass,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub coords: Vec<(String, f64)>,
    pub params: ModelParams,
    pub outcome: std::result::Result<CellValue, CellError>,
}

impl Cell {
    pub fn coord(&self, field: &str) -> Option<f64> {
        self.coords.iter().find(|(f, _)| f == field).map(|(_, v)| *v)
    }

    pub fn spectrum(&self) -> Option<&[SusceptibilityPoint]> {
        match &self.outcome {
            Ok(CellValue::Spectrum(s)) => Some(s),
            _ => None,
        }
    }

    pub fn group_index(&self) -> Option<&GroupIndexResult> {
        match &self.outcome {
            Ok(CellValue::GroupIndex(g)) => Some(g),
            _ => None,
        }
    }

    pub fn steady(&self) -> Option<&SteadyState> {
        match &self.outcome {
            Ok(CellValue::SteadyState(s)) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub cells: Vec<Cell>,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.outcome.is_err()).count()
    }
}

pub fn evaluate_cell(spec: &SweepSpec, p: &ModelParams) -> Result<CellValue> {
    let ss = steady_state(p)?;
    Ok(match spec.quantity {
        Quantity::Spectrum => CellValue::Spectrum(spectrum_with_state(p, &ss, &spec.grid.points(), spec.path, spec.eq10)?),
        Quantity::GroupIndex => CellValue::GroupIndex(group_index_with_state(p, &ss, &spec.scale, spec.path, spec.eq10)?),
        Quantity::SteadyState => CellValue::SteadyState(ss),
    })
}

/// Evaluates every cell on a pool of `workers` threads. The spec is checked
/// before any evaluation; per-cell failures are recorded, not propagated.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    if workers == 0 {
        return Err(Error::Config("worker count must be ≥ 1".into()));
    }
    let cells: Vec<(Vec<(String, f64)>, ModelParams)> = (0..spec.len()).map(|k| spec.cell(k)).collect::<Result<_>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let cells = pool.install(|| {
        cells
            .into_par_iter()
            .map(|(coords, params)| {
                let outcome = evaluate_cell(spec, &params)
                    .map_err(|e| CellError { class: e.class(), message: e.to_string() });
                Cell { coords, params, outcome }
            })
            .collect()
    });
    Ok(SweepResult { spec: spec.clone(), cells })
}

/// Sweep table: axis columns, then the quantity columns, then `status`.
/// Spectrum sweeps emit one row per probe detuning.
pub fn write_sweep_csv<W: Write>(mut out: W, result: &SweepResult) -> std::io::Result<()> {
    let axes = result.spec.column_names();
    let quantity_cols: &[&str] = match result.spec.quantity {
        Quantity::Spectrum => &["delta_s_ghz", "re_chi", "im_chi"],
        Quantity::GroupIndex => &["ng_over_pi", "ng", "derivative_estimate", "step_used", "richardson_error"],
        Quantity::SteadyState => &["w0", "re_s0", "im_s0", "re_f0", "im_f0", "residual", "multiplicity"],
    };
    let header: Vec<&str> = axes.iter().map(String::as_str).chain(quantity_cols.iter().copied()).chain(["status"]).collect();
    writeln!(out, "{}", header.join(","))?;
    for cell in &result.cells {
        let lead: Vec<String> = cell.coords.iter().map(|(_, v)| fmt_f64(*v)).collect();
        let lead = lead.join(",");
        match &cell.outcome {
            Ok(CellValue::Spectrum(points)) => {
                for pt in points {
                    writeln!(out, "{lead},{},{},{},ok", fmt_f64(pt.delta_s), fmt_f64(pt.chi.re), fmt_f64(pt.chi.im))?;
                }
            }
            Ok(CellValue::GroupIndex(g)) => {
                let vals = [g.ng_over_pi, g.ng, g.derivative_estimate, g.step_used, g.richardson_error];
                let vals: Vec<String> = vals.iter().map(|v| fmt_f64(*v)).collect();
                writeln!(out, "{lead},{},ok", vals.join(","))?;
            }
            Ok(CellValue::SteadyState(s)) => {
                let vals = [s.w0, s.s0.re, s.s0.im, s.f0.re, s.f0.im, s.residual];
                let vals: Vec<String> = vals.iter().map(|v| fmt_f64(*v)).collect();
                writeln!(out, "{lead},{},{},ok", vals.join(","), s.multiplicity)?;
            }
            Err(e) => {
                let blanks = vec![""; quantity_cols.len()].join(",");
                writeln!(out, "{lead},{blanks},{}", csv_escape(&format!("{:?}: {}", e.class, e.message)))?;
            }
        }
    }
    Ok(())
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// JSON sidecar recording the full spec.
pub fn sidecar_json(spec: &SweepSpec) -> Result<String> {
    #[derive(Serialize)]
    struct Sidecar<'a> {
        generator: &'static str,
        version: &'static str,
        spec: &'a SweepSpec,
    }
    Ok(serde_json::to_string_pretty(&Sidecar { generator: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION"), spec })?)
}
