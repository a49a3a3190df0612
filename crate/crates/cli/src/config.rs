use std::collections::BTreeMap;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use mmit::dynamics::Eq3Variant;
use mmit::response::{Eq10Variant, Path};
use mmit::sweep::SweepSpec;
use mmit::{Error, GroupIndexScale, ModelParams, ProbeGrid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathChoice {
    #[value(name = "closed_form")]
    ClosedForm,
    #[value(name = "linear_system")]
    LinearSystem,
    Both,
}

impl PathChoice {
    pub fn paths(self) -> Vec<Path> {
        match self {
            PathChoice::ClosedForm => vec![Path::ClosedForm],
            PathChoice::LinearSystem => vec![Path::LinearSystem],
            PathChoice::Both => vec![Path::ClosedForm, Path::LinearSystem],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Eq3Choice {
    #[value(name = "as-printed")]
    AsPrinted,
    Symmetrized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Eq10Choice {
    #[value(name = "eps1", alias = "lambda4-eps1")]
    Eps1,
    #[value(name = "eps2", alias = "lambda4-eps2")]
    Eps2,
    Derived,
}

/// Flags shared by every subcommand. Parameter and grid flags are named
/// after the corresponding config fields.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps and oracle grids
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub path: Option<PathChoice>,
    #[arg(long = "variant-eq3", global = true, value_enum)]
    pub variant_eq3: Option<Eq3Choice>,
    #[arg(long = "variant-eq10", global = true, value_enum)]
    pub variant_eq10: Option<Eq10Choice>,

    #[arg(long = "delta_c", global = true, allow_negative_numbers = true)]
    pub delta_c: Option<f64>,
    #[arg(long = "delta_m", global = true, allow_negative_numbers = true)]
    pub delta_m: Option<f64>,
    #[arg(long = "beta1", global = true, allow_negative_numbers = true)]
    pub beta1: Option<f64>,
    #[arg(long = "beta2", global = true, allow_negative_numbers = true)]
    pub beta2: Option<f64>,
    #[arg(long = "gamma1", global = true, allow_negative_numbers = true)]
    pub gamma1: Option<f64>,
    #[arg(long = "gamma2", global = true, allow_negative_numbers = true)]
    pub gamma2: Option<f64>,
    #[arg(long = "kappa_m", global = true, allow_negative_numbers = true)]
    pub kappa_m: Option<f64>,
    #[arg(long = "omega_c_rabi_sq", global = true, allow_negative_numbers = true)]
    pub omega_c_rabi_sq: Option<f64>,

    #[arg(long = "delta_s_min", global = true, allow_negative_numbers = true)]
    pub delta_s_min: Option<f64>,
    #[arg(long = "delta_s_max", global = true, allow_negative_numbers = true)]
    pub delta_s_max: Option<f64>,
    #[arg(long = "n_points", global = true)]
    pub n_points: Option<usize>,
    #[arg(long = "scale_pi", global = true, allow_negative_numbers = true)]
    pub scale_pi: Option<f64>,
}

/// On-disk configuration. `params` holds overrides of the reference
/// parameter set by field name.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub grid: Option<ProbeGrid>,
    pub path: Option<PathChoice>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub variant_eq3: Option<Eq3Variant>,
    pub variant_eq10: Option<Eq10Variant>,
    pub scale_pi: Option<f64>,
    pub sweep: Option<SweepSpec>,
    pub oracle_deltas: Option<Vec<f64>>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub grid: ProbeGrid,
    pub path: PathChoice,
    pub out: PathBuf,
    pub workers: usize,
    pub eq3: Eq3Variant,
    pub eq10: Eq10Variant,
    pub scale: GroupIndexScale,
    pub sweep: Option<SweepSpec>,
    pub oracle_deltas: Option<Vec<f64>>,
}

pub fn load_config_file(path: &FsPath) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

impl RunConfig {
    /// Reference values, then the config file, then command-line flags.
    pub fn resolve(args: &GlobalArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => load_config_file(path)?,
            None => ConfigFile::default(),
        };
        let mut params = ModelParams::reference();
        for (field, value) in &file.params {
            params.set(field, *value).map_err(|_| Error::Config(format!("unknown parameter `{field}` in config")))?;
        }
        let flag_params = [
            ("delta_c", args.delta_c),
            ("delta_m", args.delta_m),
            ("beta1", args.beta1),
            ("beta2", args.beta2),
            ("gamma1", args.gamma1),
            ("gamma2", args.gamma2),
            ("kappa_m", args.kappa_m),
            ("omega_c_rabi_sq", args.omega_c_rabi_sq),
        ];
        for (field, value) in flag_params {
            if let Some(v) = value {
                params.set(field, v)?;
            }
        }

        let mut grid = file.grid.unwrap_or_default();
        if let Some(v) = args.delta_s_min {
            grid.delta_s_min = v;
        }
        if let Some(v) = args.delta_s_max {
            grid.delta_s_max = v;
        }
        if let Some(v) = args.n_points {
            grid.n_points = v;
        }

        let workers = args
            .workers
            .or(file.workers)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if workers == 0 {
            return Err(Error::Config("workers must be ≥ 1".into()));
        }
        let eq3 = match args.variant_eq3 {
            Some(Eq3Choice::AsPrinted) => Eq3Variant::AsPrinted,
            Some(Eq3Choice::Symmetrized) => Eq3Variant::Symmetrized,
            None => file.variant_eq3.unwrap_or_default(),
        };
        let eq10 = match args.variant_eq10 {
            Some(Eq10Choice::Eps1) => Eq10Variant::Lambda4Eps1,
            Some(Eq10Choice::Eps2) => Eq10Variant::Lambda4Eps2,
            Some(Eq10Choice::Derived) => Eq10Variant::Derived,
            None => file.variant_eq10.unwrap_or_default(),
        };
        let scale = GroupIndexScale::new(args.scale_pi.or(file.scale_pi).unwrap_or(1.0))?;
        Ok(RunConfig {
            params,
            grid,
            path: args.path.or(file.path).unwrap_or(PathChoice::LinearSystem),
            out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            workers,
            eq3,
            eq10,
            scale,
            sweep: file.sweep,
            oracle_deltas: file.oracle_deltas,
        })
    }

    /// Creates the output directory and returns the path of `name` inside it.
    pub fn output(&self, name: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out)?;
        Ok(self.out.join(name))
    }
}
