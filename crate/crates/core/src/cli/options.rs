use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::descriptive::SummaryStat;
use crate::error::{GwError, Result};
use crate::gw::{Bandwidth, KernelShape, KernelSpec, Metric};
use crate::io::{CoordColumns, InputFormat};
use crate::regression::{parse_formula, Criterion, FormulaSpec};

#[derive(Debug, Parser)]
#[command(name = "gwkit", version, about = "Geographically weighted regression and summary statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Bw,
    Gwr,
    Gwss,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select a bandwidth by linear or golden-section search
    Bw(RunArgs),
    /// Fit GWR and write the coefficient surface
    Gwr(RunArgs),
    /// Compute GW summary statistics
    Gwss(RunArgs),
}

impl Command {
    pub fn split(self) -> (CommandKind, RunArgs) {
        match self {
            Command::Bw(a) => (CommandKind::Bw, a),
            Command::Gwr(a) => (CommandKind::Gwr, a),
            Command::Gwss(a) => (CommandKind::Gwss, a),
        }
    }
}

/// Command-line flags. Every field may also come from a `--config` file
/// (TOML key = value, keys as the flag names with `_` for `-`); flags win.
#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunArgs {
    /// Key-value configuration file
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Input data file
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// Input format: csv or geojson (default: from the file extension)
    #[arg(long)]
    pub format: Option<String>,

    /// CSV x coordinate column [default: X]
    #[arg(long)]
    pub x_col: Option<String>,

    /// CSV y coordinate column [default: Y]
    #[arg(long)]
    pub y_col: Option<String>,

    /// Column (CSV) or property (GeoJSON) holding row labels
    #[arg(long)]
    pub id_col: Option<String>,

    /// Model formula, e.g. "MedInc ~ PctBach + PctEld"
    #[arg(long)]
    pub formula: Option<String>,

    /// gaussian, exponential, bisquare, tricube or boxcar [default: bisquare]
    #[arg(long)]
    pub kernel: Option<String>,

    /// Adaptive (nearest-neighbor count) bandwidth [default]
    #[arg(long = "adaptive", conflicts_with = "fixed")]
    #[serde(skip)]
    pub adaptive_flag: bool,

    #[arg(skip)]
    pub adaptive: Option<bool>,

    /// Fixed (distance) bandwidth
    #[arg(long)]
    #[serde(skip)]
    pub fixed: bool,

    /// Minkowski exponent p for distances [default: Euclidean]
    #[arg(long)]
    pub minkowski: Option<f64>,

    /// Explicit bandwidth: neighbor count (adaptive) or distance (fixed)
    #[arg(long)]
    pub bw: Option<f64>,

    /// Bandwidth search: linear or golden
    #[arg(long)]
    pub search: Option<String>,

    /// Search range lo:hi, or lo:hi:step for a fixed linear search
    #[arg(long)]
    pub range: Option<String>,

    /// Golden-section tolerance [default: 0.01 * (hi - lo)]
    #[arg(long)]
    pub tol: Option<f64>,

    /// Criterion: aic or cv [default: aic]
    #[arg(long)]
    pub criterion: Option<String>,

    /// Statistics for gwss, comma separated: mean,std,skew,median
    #[arg(long)]
    pub stats: Option<String>,

    /// Variables for gwss, comma separated
    #[arg(long)]
    pub vars: Option<String>,

    /// Output file (.csv, or .geojson for GeoJSON input)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads (falls back to GWKIT_THREADS)
    #[arg(long, env = "GWKIT_THREADS")]
    pub threads: Option<usize>,
}

impl RunArgs {
    /// Fills unset flags from `file`.
    pub fn merge(self, file: RunArgs) -> RunArgs {
        let adaptive = if self.fixed {
            Some(false)
        } else if self.adaptive_flag {
            Some(true)
        } else {
            self.adaptive.or(file.adaptive)
        };
        RunArgs {
            config: self.config,
            data: self.data.or(file.data),
            format: self.format.or(file.format),
            x_col: self.x_col.or(file.x_col),
            y_col: self.y_col.or(file.y_col),
            id_col: self.id_col.or(file.id_col),
            formula: self.formula.or(file.formula),
            kernel: self.kernel.or(file.kernel),
            adaptive_flag: false,
            adaptive,
            fixed: false,
            minkowski: self.minkowski.or(file.minkowski),
            bw: self.bw.or(file.bw),
            search: self.search.or(file.search),
            range: self.range.or(file.range),
            tol: self.tol.or(file.tol),
            criterion: self.criterion.or(file.criterion),
            stats: self.stats.or(file.stats),
            vars: self.vars.or(file.vars),
            out: self.out.or(file.out),
            threads: self.threads.or(file.threads),
        }
    }

    pub fn load_config(path: &Path) -> Result<RunArgs> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GwError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| GwError::Config(format!("{}: {}", path.display(), e.message())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchKind {
    Linear,
    Golden,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BandwidthMode {
    Explicit(Bandwidth),
    Search {
        kind: SearchKind,
        lo: f64,
        hi: f64,
        /// Fixed linear search step.
        step: Option<f64>,
        tol: Option<f64>,
    },
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub data: PathBuf,
    pub format: InputFormat,
    pub columns: CoordColumns,
    pub formula: Option<FormulaSpec>,
    pub kernel: KernelSpec,
    pub mode: Option<BandwidthMode>,
    pub criterion: Criterion,
    pub stats: Vec<SummaryStat>,
    pub vars: Vec<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

fn parse_list<T, F: Fn(&str) -> Result<T>>(s: &str, f: F) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(f)
        .collect()
}

fn parse_range(s: &str) -> Result<(f64, f64, Option<f64>)> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| GwError::Config(format!("bad number '{t}' in range '{s}'")))
    };
    match parts.as_slice() {
        [lo, hi] => Ok((num(lo)?, num(hi)?, None)),
        [lo, hi, step] => Ok((num(lo)?, num(hi)?, Some(num(step)?))),
        _ => Err(GwError::Config(format!("range must be lo:hi or lo:hi:step, got '{s}'"))),
    }
}

impl RunConfig {
    pub fn from_args(command: CommandKind, args: RunArgs) -> Result<RunConfig> {
        let args = match &args.config {
            Some(path) => {
                let file = RunArgs::load_config(path)?;
                args.merge(file)
            }
            None => args.merge(RunArgs::default()),
        };
        let data = args
            .data
            .clone()
            .ok_or_else(|| GwError::Config("--data is required".into()))?;
        let format = match &args.format {
            Some(f) => f.parse()?,
            None => InputFormat::from_path(&data),
        };
        let columns = CoordColumns {
            x: args.x_col.clone().unwrap_or_else(|| "X".into()),
            y: args.y_col.clone().unwrap_or_else(|| "Y".into()),
            id: args.id_col.clone(),
        };
        let shape: KernelShape = args.kernel.as_deref().unwrap_or("bisquare").parse()?;
        let adaptive = args.adaptive.unwrap_or(true);
        let metric = match args.minkowski {
            Some(p) => Metric::minkowski(p)?,
            None => Metric::Euclidean,
        };
        let kernel = KernelSpec::new(shape, adaptive).with_metric(metric);
        let criterion: Criterion = args.criterion.as_deref().unwrap_or("aic").parse()?;
        let formula = args.formula.as_deref().map(parse_formula).transpose()?;

        let explicit = match args.bw {
            Some(b) if adaptive => {
                if b.fract() != 0.0 || b < 1.0 {
                    return Err(GwError::Config(format!(
                        "adaptive bandwidth must be a positive integer, got {b}"
                    )));
                }
                Some(Bandwidth::Adaptive(b as usize))
            }
            Some(b) => Some(Bandwidth::Fixed(b)),
            None => None,
        };
        let search = match args.search.as_deref() {
            Some("linear") => Some(SearchKind::Linear),
            Some("golden") => Some(SearchKind::Golden),
            Some(other) => return Err(GwError::Config(format!("unknown search '{other}'"))),
            None => None,
        };
        let mode = match (explicit, search) {
            (Some(_), Some(_)) => {
                return Err(GwError::Config(
                    "give either --bw or --search, not both".into(),
                ))
            }
            (Some(bw), None) => Some(BandwidthMode::Explicit(bw)),
            (None, Some(kind)) => {
                let range = args.range.as_deref().ok_or_else(|| {
                    GwError::Config("--range lo:hi is required with --search".into())
                })?;
                let (lo, hi, step) = parse_range(range)?;
                if !(lo < hi) {
                    return Err(GwError::InvalidInterval { lo, hi });
                }
                if kind == SearchKind::Linear && !adaptive && step.is_none() {
                    return Err(GwError::Config(
                        "fixed linear search needs --range lo:hi:step".into(),
                    ));
                }
                if let Some(s) = step {
                    if !(s > 0.0) {
                        return Err(GwError::Config(format!("range step must be positive, got {s}")));
                    }
                }
                Some(BandwidthMode::Search {
                    kind,
                    lo,
                    hi,
                    step,
                    tol: args.tol,
                })
            }
            (None, None) => None,
        };

        match command {
            CommandKind::Bw if !matches!(mode, Some(BandwidthMode::Search { .. })) => {
                return Err(GwError::Config("bw needs --search and --range".into()))
            }
            CommandKind::Gwr if mode.is_none() => {
                return Err(GwError::Config("gwr needs --bw or --search".into()))
            }
            CommandKind::Gwss if !matches!(mode, Some(BandwidthMode::Explicit(_))) => {
                return Err(GwError::Config("gwss needs an explicit --bw".into()))
            }
            _ => {}
        }
        if matches!(command, CommandKind::Bw | CommandKind::Gwr) && formula.is_none() {
            return Err(GwError::Config("--formula is required".into()));
        }

        let stats = match args.stats.as_deref() {
            Some(s) => parse_list(s, |t| t.parse())?,
            None => SummaryStat::ALL.to_vec(),
        };
        let vars = match args.vars.as_deref() {
            Some(s) => parse_list(s, |t| Ok(t.to_string()))?,
            None => Vec::new(),
        };
        if command == CommandKind::Gwss && vars.is_empty() {
            return Err(GwError::Config("gwss needs --vars".into()));
        }
        if matches!(command, CommandKind::Gwr | CommandKind::Gwss) && args.out.is_none() {
            return Err(GwError::Config("--out is required".into()));
        }
        if args.threads == Some(0) {
            return Err(GwError::Config("--threads must be at least 1".into()));
        }

        Ok(RunConfig {
            command,
            data,
            format,
            columns,
            formula,
            kernel,
            mode,
            criterion,
            stats,
            vars,
            out: args.out,
            threads: args.threads,
        })
    }
}
