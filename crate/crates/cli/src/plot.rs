//! Static plot output: a gnuplot script with inline data and a standalone
//! SVG rendering of the same panels.

use std::fmt::Write;

pub struct Series {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

pub struct Panel {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub series: Vec<Series>,
}

const COLORS: [&str; 8] = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"];

fn quote(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn gnuplot_script(panels: &[Panel], png_name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set terminal pngcairo size 900,{} enhanced", 380 * panels.len());
    let _ = writeln!(s, "set output \"{}\"", quote(png_name));
    let _ = writeln!(s, "set multiplot layout {},1", panels.len());
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set key outside right");
    for (p, panel) in panels.iter().enumerate() {
        for (k, series) in panel.series.iter().enumerate() {
            let _ = writeln!(s, "$d{p}_{k} << EOD");
            for (x, y) in series.xs.iter().zip(&series.ys) {
                if y.is_finite() {
                    let _ = writeln!(s, "{x:.16e} {y:.16e}");
                } else {
                    let _ = writeln!(s);
                }
            }
            let _ = writeln!(s, "EOD");
        }
        let _ = writeln!(s, "set title \"{}\"", quote(&panel.title));
        let _ = writeln!(s, "set xlabel \"{}\"", quote(&panel.xlabel));
        let _ = writeln!(s, "set ylabel \"{}\"", quote(&panel.ylabel));
        let plots: Vec<String> = panel
            .series
            .iter()
            .enumerate()
            .map(|(k, series)| {
                format!("$d{p}_{k} using 1:2 with lines lw 2 lc rgb \"{}\" title \"{}\"", COLORS[k % COLORS.len()], quote(&series.label))
            })
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    let _ = writeln!(s, "unset multiplot");
    s
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

pub fn svg(panels: &[Panel]) -> String {
    let (w, ph) = (900.0, 380.0);
    let (ml, mr, mt, mb) = (80.0, 190.0, 36.0, 50.0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{}\" font-family=\"sans-serif\" font-size=\"12\">",
        ph * panels.len() as f64
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for (p, panel) in panels.iter().enumerate() {
        let y0 = p as f64 * ph;
        let finite = || panel.series.iter().flat_map(|sr| sr.xs.iter().zip(&sr.ys)).filter(|(x, y)| x.is_finite() && y.is_finite());
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in finite() {
            xmin = xmin.min(*x);
            xmax = xmax.max(*x);
            ymin = ymin.min(*y);
            ymax = ymax.max(*y);
        }
        if !xmin.is_finite() {
            (xmin, xmax, ymin, ymax) = (0.0, 1.0, 0.0, 1.0);
        }
        if xmax == xmin {
            xmax = xmin + 1.0;
        }
        if ymax == ymin {
            ymax = ymin + 1.0;
        }
        let pad = 0.05 * (ymax - ymin);
        let (ymin, ymax) = (ymin - pad, ymax + pad);
        let (pw, pht) = (w - ml - mr, ph - mt - mb);
        let sx = |x: f64| ml + (x - xmin) / (xmax - xmin) * pw;
        let sy = |y: f64| y0 + mt + (ymax - y) / (ymax - ymin) * pht;

        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{}</text>", ml + pw / 2.0, y0 + 22.0, escape_xml(&panel.title));
        let _ = writeln!(s, "<rect x=\"{ml}\" y=\"{}\" width=\"{pw}\" height=\"{pht}\" fill=\"none\" stroke=\"#444\"/>", y0 + mt);
        for t in nice_ticks(xmin, xmax) {
            let x = sx(t);
            let _ = writeln!(s, "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/>", y0 + mt, y0 + mt + pht);
            let _ = writeln!(s, "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", y0 + mt + pht + 16.0, fmt_tick(t));
        }
        for t in nice_ticks(ymin, ymax) {
            let y = sy(t);
            let _ = writeln!(s, "<line x1=\"{ml}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#ddd\"/>", ml + pw);
            let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>", ml - 6.0, y + 4.0, fmt_tick(t));
        }
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>", ml + pw / 2.0, y0 + ph - 10.0, escape_xml(&panel.xlabel));
        let _ = writeln!(
            s,
            "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>",
            y0 + mt + pht / 2.0,
            escape_xml(&panel.ylabel)
        );
        for (k, series) in panel.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let mut segment = Vec::new();
            let flush = |segment: &mut Vec<String>, s: &mut String| {
                if segment.len() > 1 {
                    let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>", segment.join(" "));
                }
                segment.clear();
            };
            for (x, y) in series.xs.iter().zip(&series.ys) {
                if x.is_finite() && y.is_finite() {
                    segment.push(format!("{:.2},{:.2}", sx(*x), sy(*y)));
                } else {
                    flush(&mut segment, &mut s);
                }
            }
            flush(&mut segment, &mut s);
            let ly = y0 + mt + 14.0 + 18.0 * k as f64;
            let lx = ml + pw + 12.0;
            let _ = writeln!(s, "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>", lx + 22.0);
            let _ = writeln!(s, "<text x=\"{}\" y=\"{}\">{}</text>", lx + 28.0, ly + 4.0, escape_xml(&series.label));
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}

fn fmt_tick(t: f64) -> String {
    if t == 0.0 {
        "0".into()
    } else if t.abs() >= 1e4 || t.abs() < 1e-3 {
        format!("{t:.1e}")
    } else {
        let s = format!("{t:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel() -> Panel {
        Panel {
            title: "a<b".into(),
            xlabel: "x".into(),
            ylabel: "y".into(),
            series: vec![Series { label: "s".into(), xs: vec![0.0, 1.0, 2.0], ys: vec![1.0, f64::NAN, 3.0] }],
        }
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let out = svg(&[panel()]);
        assert!(out.starts_with("<svg"));
        assert!(out.trim_end().ends_with("</svg>"));
        assert!(out.contains("a&lt;b"));
    }

    #[test]
    fn gnuplot_inline_data() {
        let out = gnuplot_script(&[panel()], "x.png");
        assert!(out.contains("$d0_0 << EOD"));
        assert!(out.contains("plot $d0_0 using 1:2"));
    }

    #[test]
    fn ticks_cover_range() {
        let t = nice_ticks(-3.0, 3.0);
        assert_eq!(t, vec![-2.0, 0.0, 2.0]);
        assert_eq!(nice_ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
    }
}
