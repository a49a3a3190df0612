//! Geometric feature extraction on absorption spectra (Im χ).

use serde::{Deserialize, Serialize};

use super::SusceptibilityPoint;
use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureOptions {
    /// Extrema whose topographic prominence is below this fraction of the
    /// Im χ range are discarded as ripple.
    pub min_relative_prominence: f64,
}

impl Default for FeatureOptions {
    fn default() -> Self {
        FeatureOptions { min_relative_prominence: 0.01 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub index: usize,
    pub delta_s: f64,
    /// Im χ at the extremum.
    pub height: f64,
    pub prominence: f64,
    /// Full width at half height for peaks, at half prominence for dips.
    /// Absent when the level is not crossed inside the grid.
    pub fwhm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFeatures {
    pub peaks: Vec<Extremum>,
    pub dips: Vec<Extremum>,
    pub deepest_dip: Option<Extremum>,
    pub max_im: f64,
    /// Distance between the two tallest peaks.
    pub splitting: Option<f64>,
    /// (h_L − h_R)/(h_L + h_R) for the two tallest peaks.
    pub asymmetry: Option<f64>,
}

impl SpectrumFeatures {
    /// Tallest peak.
    pub fn main_peak(&self) -> &Extremum {
        self.peaks.iter().max_by(|a, b| a.height.total_cmp(&b.height)).expect("at least one peak")
    }

    /// Dip closest to `delta_s`.
    pub fn dip_near(&self, delta_s: f64) -> Option<&Extremum> {
        self.dips.iter().min_by(|a, b| (a.delta_s - delta_s).abs().total_cmp(&(b.delta_s - delta_s).abs()))
    }
}

pub fn detect_features(spec: &[SusceptibilityPoint]) -> Result<SpectrumFeatures> {
    detect_features_with(spec, &FeatureOptions::default())
}

pub fn detect_features_with(spec: &[SusceptibilityPoint], opts: &FeatureOptions) -> Result<SpectrumFeatures> {
    if spec.len() < MIN_POINTS {
        return Err(Error::Feature(format!("need at least {MIN_POINTS} points, got {}", spec.len())));
    }
    if spec.windows(2).any(|w| !(w[1].delta_s > w[0].delta_s)) {
        return Err(Error::Feature("spectrum must be strictly ascending in delta_s".into()));
    }
    let x: Vec<f64> = spec.iter().map(|pt| pt.delta_s).collect();
    let y: Vec<f64> = spec.iter().map(|pt| pt.chi.im).collect();
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Feature("non-finite Im chi".into()));
    }
    let max_im = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_im = y.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = opts.min_relative_prominence * (max_im - min_im);

    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    let peaks: Vec<Extremum> = local_maxima(&y)
        .into_iter()
        .map(|i| (i, prominence(&y, i)))
        .filter(|&(_, prom)| prom > threshold)
        .map(|(i, prom)| Extremum {
            index: i,
            delta_s: x[i],
            height: y[i],
            prominence: prom,
            fwhm: width_at(&x, &y, i, 0.5 * y[i]),
        })
        .collect();
    if peaks.is_empty() {
        return Err(Error::Feature("no absorption peak found".into()));
    }
    let dips: Vec<Extremum> = local_maxima(&neg)
        .into_iter()
        .map(|i| (i, prominence(&neg, i)))
        .filter(|&(_, prom)| prom > threshold)
        .map(|(i, prom)| Extremum {
            index: i,
            delta_s: x[i],
            height: y[i],
            prominence: prom,
            fwhm: width_at(&x, &neg, i, neg[i] - 0.5 * prom),
        })
        .collect();
    let deepest_dip = dips.iter().copied().min_by(|a, b| a.height.total_cmp(&b.height));

    let mut tallest = peaks.clone();
    tallest.sort_by(|a, b| b.height.total_cmp(&a.height));
    let (splitting, asymmetry) = if tallest.len() >= 2 {
        let (mut l, mut r) = (tallest[0], tallest[1]);
        if l.delta_s > r.delta_s {
            std::mem::swap(&mut l, &mut r);
        }
        (Some(r.delta_s - l.delta_s), Some((l.height - r.height) / (l.height + r.height)))
    } else {
        (None, None)
    };
    Ok(SpectrumFeatures { peaks, dips, deepest_dip, max_im, splitting, asymmetry })
}

/// Strict local maxima; a flat top counts once, at its left edge.
fn local_maxima(y: &[f64]) -> Vec<usize> {
    let n = y.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if y[i] > y[i - 1] {
            let mut j = i;
            while j + 1 < n && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < n && y[j + 1] < y[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Height above the higher of the two bases reached before climbing past
/// the extremum on either side.
fn prominence(y: &[f64], i: usize) -> f64 {
    let h = y[i];
    let mut left_min = h;
    for &v in y[..i].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &y[i + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// Width of the excursion of `y` above `level` containing index `i`, with
/// linear interpolation of both crossings.
fn width_at(x: &[f64], y: &[f64], i: usize, level: f64) -> Option<f64> {
    let mut l = i;
    while l > 0 && y[l - 1] > level {
        l -= 1;
    }
    if l == 0 {
        return None;
    }
    let mut r = i;
    while r + 1 < y.len() && y[r + 1] > level {
        r += 1;
    }
    if r + 1 == y.len() {
        return None;
    }
    let xl = crossing(x[l - 1], y[l - 1], x[l], y[l], level);
    let xr = crossing(x[r], y[r], x[r + 1], y[r + 1], level);
    Some(xr - xl)
}

fn crossing(x0: f64, y0: f64, x1: f64, y1: f64, level: f64) -> f64 {
    x0 + (level - y0) * (x1 - x0) / (y1 - y0)
}

/// Positions where Re χ changes sign, linearly interpolated.
pub fn re_zero_crossings(spec: &[SusceptibilityPoint]) -> Vec<f64> {
    let mut out = Vec::new();
    for w in spec.windows(2) {
        let (a, b) = (w[0].chi.re, w[1].chi.re);
        if a == 0.0 {
            out.push(w[0].delta_s);
        } else if a * b < 0.0 {
            out.push(crossing(w[0].delta_s, a, w[1].delta_s, b, 0.0));
        }
    }
    if spec.last().is_some_and(|pt| pt.chi.re == 0.0) {
        out.push(spec[spec.len() - 1].delta_s);
    }
    out
}

/// Result of comparing Im χ_a(Δs) with the mirrored Im χ_b(−Δs + s₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorComparison {
    pub offset: f64,
    /// ‖a − mirrored b‖₂ / ‖a‖₂ over the overlapping samples.
    pub mismatch: f64,
}

/// Both spectra must share one uniform grid symmetric about zero. The
/// offset s₀ is restricted to whole grid steps within ±`max_offset` and
/// chosen by maximal normalized cross-correlation.
pub fn mirror_comparison(
    a: &[SusceptibilityPoint],
    b: &[SusceptibilityPoint],
    max_offset: f64,
) -> Result<MirrorComparison> {
    let n = a.len();
    if n < 2 || b.len() != n {
        return Err(Error::Feature("mirror comparison needs two spectra on the same grid".into()));
    }
    let step = (a[n - 1].delta_s - a[0].delta_s) / (n - 1) as f64;
    let tol = 1e-9 * step;
    for k in 0..n {
        if (a[k].delta_s - b[k].delta_s).abs() > tol || (a[k].delta_s + a[n - 1 - k].delta_s).abs() > tol {
            return Err(Error::Feature("grids must coincide and be symmetric about zero".into()));
        }
    }
    let fa: Vec<f64> = a.iter().map(|pt| pt.chi.im).collect();
    // mirrored[k] = Im χ_b(−Δs_k)
    let mirrored: Vec<f64> = b.iter().rev().map(|pt| pt.chi.im).collect();
    let max_shift = (max_offset / step).floor() as i64;
    let mut best: Option<(i64, f64)> = None;
    for shift in -max_shift..=max_shift {
        let score = correlation(&fa, &mirrored, shift);
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((shift, score));
        }
    }
    let (shift, _) = best.expect("shift range is non-empty");
    let (num, den) = overlap(&fa, &mirrored, shift)
        .fold((0.0, 0.0), |(num, den), (u, v)| (num + (u - v) * (u - v), den + u * u));
    let mismatch = if den > 0.0 { (num / den).sqrt() } else { f64::INFINITY };
    Ok(MirrorComparison { offset: shift as f64 * step, mismatch })
}

/// Pairs (a[k], m[k+shift]) where m[k+shift] = Im χ_b(−Δs_k + shift·step).
fn overlap<'a>(a: &'a [f64], m: &'a [f64], shift: i64) -> impl Iterator<Item = (f64, f64)> + 'a {
    // Im χ_b(−Δs_k + s) sits at mirrored index k − shift.
    (0..a.len()).filter_map(move |k| {
        let j = k as i64 - shift;
        (0..m.len() as i64).contains(&j).then(|| (a[k], m[j as usize]))
    })
}

fn correlation(a: &[f64], m: &[f64], shift: i64) -> f64 {
    let (dot, na, nm) = overlap(a, m, shift)
        .fold((0.0, 0.0, 0.0), |(d, x, z), (u, v)| (d + u * v, x + u * u, z + v * v));
    if na == 0.0 || nm == 0.0 {
        f64::NEG_INFINITY
    } else {
        dot / (na * nm).sqrt()
    }
}
