#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod plot;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use mmit::error::ErrorClass;
use mmit::figures::{figure, ClaimStatus, FigureReport};
use mmit::oracle::{max_relative_error, oracle_grid, standard_deltas};
use mmit::response::group_index::group_index_with_state;
use mmit::response::{divergence_report, fmt_f64, secant_slope, spectrum, write_spectrum_csv, Path};
use mmit::steady::{solve_population_inversion, stationary_residuals};
use mmit::sweep::{run_sweep, sidecar_json, write_sweep_csv, Quantity, SweepSpec};
use mmit::{steady_state, Error, Result};

use config::{load_config_file, GlobalArgs, PathChoice, RunConfig};
use plot::{Panel, Series};

#[derive(Debug, Parser)]
#[command(name = "mmit", version, about = "Pump-probe response of a quantum dot coupled to Majorana modes")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steady state of the pumped system (JSON on stdout and steady.json)
    Steady,
    /// χ⁽¹⁾ over the probe grid, with plot script and SVG
    Spectrum,
    /// Group-velocity index at the exciton line
    GroupIndex,
    /// Run a sweep spec from --spec or the config's `sweep` entry
    Sweep {
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Run a figure recipe and print its claim table
    Figure { id: String },
    /// Compare the time-domain oracle against the linear-response result
    OracleCheck,
}

enum Failure {
    Error(Error),
    Claims,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(Error::Io(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(5),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::Solver => 3,
                ErrorClass::Io => 4,
            })
        }
    }
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let cfg = RunConfig::resolve(&cli.global)?;
    match cli.command {
        Command::Steady => cmd_steady(&cfg)?,
        Command::Spectrum => cmd_spectrum(&cfg)?,
        Command::GroupIndex => cmd_group_index(&cfg)?,
        Command::Sweep { spec } => cmd_sweep(&cfg, spec)?,
        Command::Figure { id } => return cmd_figure(&cfg, &id),
        Command::OracleCheck => cmd_oracle_check(&cfg)?,
    }
    Ok(())
}

fn create(cfg: &RunConfig, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(cfg.output(name)?)?))
}

fn write_text(cfg: &RunConfig, name: &str, text: &str) -> Result<()> {
    let mut f = create(cfg, name)?;
    f.write_all(text.as_bytes())?;
    f.flush()?;
    Ok(())
}

fn cmd_steady(cfg: &RunConfig) -> Result<()> {
    let p = &cfg.params;
    let root = solve_population_inversion(p)?;
    let ss = steady_state(p)?;
    let residuals = stationary_residuals(p, &ss, cfg.eq3);
    let doc = json!({
        "params": p,
        "w0": ss.w0,
        "s0": ss.s0,
        "f0": ss.f0,
        "residual": ss.residual,
        "multiplicity": ss.multiplicity,
        "physical_roots": root.physical_roots,
        "variant_eq3": cfg.eq3,
        "stationary_residuals": residuals,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    write_text(cfg, "steady.json", &(text.clone() + "\n"))?;
    println!("{text}");
    Ok(())
}

fn spectrum_panels(title: &str, series: &[(String, Vec<mmit::response::SusceptibilityPoint>)]) -> Vec<Panel> {
    let make = |part: &str, pick: fn(&mmit::response::SusceptibilityPoint) -> f64| Panel {
        title: format!("{title}: {part}"),
        xlabel: "Δs (GHz)".into(),
        ylabel: part.into(),
        series: series
            .iter()
            .map(|(label, pts)| Series {
                label: label.clone(),
                xs: pts.iter().map(|pt| pt.delta_s).collect(),
                ys: pts.iter().map(pick).collect(),
            })
            .collect(),
    };
    vec![make("Im χ", |pt| pt.chi.im), make("Re χ", |pt| pt.chi.re)]
}

fn write_plots(cfg: &RunConfig, stem: &str, panels: &[Panel]) -> Result<()> {
    write_text(cfg, &format!("{stem}.gp"), &plot::gnuplot_script(panels, &format!("{stem}.png")))?;
    write_text(cfg, &format!("{stem}.svg"), &plot::svg(panels))
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<()> {
    cfg.grid.validate()?;
    let mut series = Vec::new();
    for path in cfg.path.paths() {
        let points = spectrum(&cfg.params, &cfg.grid, path, cfg.eq10)?;
        let name = match cfg.path {
            PathChoice::Both => format!("spectrum_{}.csv", path.name()),
            _ => "spectrum.csv".to_string(),
        };
        let mut out = create(cfg, &name)?;
        write_spectrum_csv(&mut out, &points)?;
        out.flush()?;
        println!("wrote {}", cfg.out.join(&name).display());
        series.push((path.name().to_string(), points));
    }
    if cfg.path == PathChoice::Both {
        let report = divergence_report(&[("spectrum".into(), cfg.params, cfg.grid.points())])?;
        write_text(cfg, "divergence_report.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
        for v in &report.variants {
            println!("eq10 variant {:<8} max rel err {:.3e} {}", v.variant.name(), v.max_rel_err, if v.agrees { "agrees" } else { "diverges" });
        }
        match report.selected {
            Some(v) => println!("selected variant: {}", v.name()),
            None => println!("no closed-form variant agrees; linear system is authoritative"),
        }
    }
    write_plots(cfg, "spectrum", &spectrum_panels("spectrum", &series))
}

fn cmd_group_index(cfg: &RunConfig) -> Result<()> {
    let p = &cfg.params;
    let ss = steady_state(p)?;
    let mut results = Vec::new();
    for path in cfg.path.paths() {
        let r = group_index_with_state(p, &ss, &cfg.scale, path, cfg.eq10)?;
        results.push(json!({ "path": path, "result": r }));
    }
    let secant = secant_slope(p, &ss)?;
    let doc = json!({ "params": p, "group_index": results, "secant_slope": secant });
    let text = serde_json::to_string_pretty(&doc)?;
    write_text(cfg, "group_index.json", &(text.clone() + "\n"))?;
    println!("{text}");
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig, spec_path: Option<PathBuf>) -> Result<()> {
    let mut spec: SweepSpec = match spec_path {
        Some(path) => {
            let text = std::fs::read_to_string(&path)?;
            // either a bare spec or a config document with a `sweep` entry
            match serde_json::from_str(&text) {
                Ok(spec) => spec,
                Err(_) => load_config_file(&path)?.sweep.ok_or_else(|| Error::Spec(format!("{}: no sweep spec", path.display())))?,
            }
        }
        None => cfg.sweep.clone().ok_or_else(|| Error::Spec("no sweep spec given (--spec or config `sweep`)".into()))?,
    };
    match cfg.path {
        PathChoice::ClosedForm => spec.path = Path::ClosedForm,
        PathChoice::LinearSystem => {}
        PathChoice::Both => return Err(Error::Spec("a sweep runs on a single path".into())),
    }
    spec.validate()?;
    let result = run_sweep(&spec, cfg.workers)?;
    let mut out = create(cfg, "sweep.csv")?;
    write_sweep_csv(&mut out, &result)?;
    out.flush()?;
    write_text(cfg, "sweep.json", &(sidecar_json(&spec)? + "\n"))?;
    println!("{} cells, {} failed; wrote {}", result.cells.len(), result.failures(), cfg.out.join("sweep.csv").display());
    Ok(())
}

fn figure_panels(report: &FigureReport) -> Vec<Panel> {
    let title = format!("{}: {}", report.recipe.id, report.recipe.title);
    match report.recipe.spec.quantity {
        Quantity::Spectrum => {
            let series: Vec<(String, Vec<_>)> = report
                .result
                .cells
                .iter()
                .filter_map(|c| {
                    let label = c.coords.iter().map(|(f, v)| format!("{f}={v}")).collect::<Vec<_>>().join(" ");
                    c.spectrum().map(|s| (label, s.to_vec()))
                })
                .collect();
            spectrum_panels(&title, &series)
        }
        _ => vec![Panel {
            title,
            xlabel: report.curves.first().map_or(String::new(), |c| c.abscissa_field.clone()),
            ylabel: "n_g / Π".into(),
            series: report
                .curves
                .iter()
                .map(|c| Series {
                    label: c.label.iter().map(|(f, v)| format!("{f}={v}")).collect::<Vec<_>>().join(" "),
                    xs: c.abscissa.clone(),
                    ys: c.ng_over_pi.iter().map(|v| v.unwrap_or(f64::NAN)).collect(),
                })
                .collect(),
        }],
    }
}

fn cmd_figure(cfg: &RunConfig, id: &str) -> std::result::Result<(), Failure> {
    let report = figure(id, cfg.workers)?;
    let mut out = create(cfg, &format!("{id}.csv"))?;
    write_sweep_csv(&mut out, &report.result)?;
    out.flush()?;
    let doc = json!({
        "recipe": report.recipe,
        "claims": report.claims,
        "spectra": report.spectra,
        "curves": report.curves,
    });
    write_text(cfg, &format!("{id}.json"), &(serde_json::to_string_pretty(&doc).map_err(Error::from)? + "\n"))?;
    write_plots(cfg, id, &figure_panels(&report))?;

    println!("{}: {}", report.recipe.id, report.recipe.title);
    for claim in &report.claims {
        println!("  {}: {} | {}", claim.name, claim.status.label(), claim.detail);
    }
    if report.claims.iter().any(|c| c.status == ClaimStatus::Fail) {
        return Err(Failure::Claims);
    }
    Ok(())
}

fn cmd_oracle_check(cfg: &RunConfig) -> Result<()> {
    let deltas = cfg.oracle_deltas.clone().unwrap_or_else(standard_deltas);
    let rows = oracle_grid(&cfg.params, &deltas, cfg.eq3, cfg.workers)?;
    let scale = rows.iter().map(|r| r.chi_analytic.norm()).fold(0.0, f64::max);
    let mut out = create(cfg, "oracle_check.csv")?;
    writeln!(out, "delta_ghz,re_chi_analytic,im_chi_analytic,re_chi_oracle,im_chi_oracle,rel_err")?;
    for r in &rows {
        let rel = (r.oracle.chi - r.chi_analytic).norm() / scale;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(r.delta),
            fmt_f64(r.chi_analytic.re),
            fmt_f64(r.chi_analytic.im),
            fmt_f64(r.oracle.chi.re),
            fmt_f64(r.oracle.chi.im),
            fmt_f64(rel)
        )?;
    }
    out.flush()?;
    let summary = json!({
        "variant_eq3": cfg.eq3,
        "points": rows.len(),
        "max_rel_err": max_relative_error(&rows),
        "all_settled": rows.iter().all(|r| r.oracle.settled),
        "max_second_harmonic_ratio": rows.iter().map(|r| r.oracle.second_harmonic_ratio).fold(0.0, f64::max),
        "max_abs_im_sz": rows.iter().map(|r| r.oracle.max_abs_im_sz).fold(0.0, f64::max),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
