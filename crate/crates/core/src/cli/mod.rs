//! `spacings` command-line front end.
//!
//! Every subcommand writes one [`ResultEnvelope`]. Without `--output` the
//! envelope goes to `$SPACINGS_OUT_DIR/<subcommand>.<ext>` when that variable
//! is set, otherwise to stdout.
//!
//! CSV schemas:
//!
//! | subcommand | header |
//! |------------|--------|
//! | simulate   | `quantity,i,j,value` |
//! | exact      | `method,counts,hats,numerator,denominator,probability` |
//! | moments    | `table,n,i,j,value` |
//! | asympt     | `route,quantity,i,j,value` |
//! | verify     | `id,name,check,measured,target,tolerance,comparison,passed` |
//! | report     | `k,quantity,i,j,value` |
//!
//! Exit codes: 0 success, 1 a tolerance or consistency check failed, 2 usage
//! or input error.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use commands::{
    AsymptPayload, ExactComparison, ExactPayload, MomentRow, MomentsPayload, ReportPayload,
    ReportRow,
};
pub use output::{render, write_result, CsvTable, Payload, ResultEnvelope, SCHEMA_VERSION};

pub const OUT_DIR_ENV: &str = "SPACINGS_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Split,
    Direct,
}

#[derive(Debug, Parser)]
#[command(
    name = "spacings",
    version,
    about = "Discrete spacings: simulation, exact laws, moments, asymptotic constants"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// TOML file whose keys fill in flags that were not given
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Record the wall-clock time in the envelope (breaks byte-identical output)
    #[arg(long, global = true)]
    pub timestamp: bool,
    /// Stabilization tolerance for extrapolated constants
    #[arg(long, global = true)]
    pub stabilization_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo batch of terminal states
    Simulate(SimulateArgs),
    /// Exact joint law of the spacing counts
    Exact(ExactArgs),
    /// Exact mean, covariance and projected moment tables
    Moments(MomentsArgs),
    /// theta, Sigma and the vacancy constant by quadrature and by extrapolation
    Asympt(AsymptArgs),
    /// Run the cross-check suite
    Verify(VerifyArgs),
    /// Constants table for k = 2..=k-max with the k = 2 closed forms
    Report(ReportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Exact(_) => "exact",
            Command::Moments(_) => "moments",
            Command::Asympt(_) => "asympt",
            Command::Verify(_) => "verify",
            Command::Report(_) => "report",
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// default 10000
    #[arg(long)]
    pub replications: Option<u64>,
    /// default 0
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated projection vector (default all ones)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub projection: Option<Vec<f64>>,
    /// default 4
    #[arg(long)]
    pub max_order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Also run the other method and report the total variation distance
    #[arg(long)]
    pub compare: bool,
    /// Largest n accepted (default 40 for split, 20 for direct)
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long)]
    pub k: Option<usize>,
    /// default 200
    #[arg(long = "max-n", short = 'N')]
    pub max_n: Option<usize>,
    /// default 8
    #[arg(long = "max-order", short = 'M')]
    pub max_order: Option<usize>,
    #[arg(
        long,
        short = 'c',
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub projection: Option<Vec<f64>>,
    /// Rational arithmetic (N <= 30)
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct AsymptArgs {
    #[arg(long)]
    pub k: Option<usize>,
    /// default 128
    #[arg(long)]
    pub nodes: Option<usize>,
    /// default 64
    #[arg(long)]
    pub inner_nodes: Option<usize>,
    /// Extrapolation depth, default 200
    #[arg(long = "max-n", short = 'N')]
    pub max_n: Option<usize>,
    /// Largest k accepted, default 8
    #[arg(long)]
    pub k_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated criterion ids (default all)
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<u8>>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// default 8
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub inner_nodes: Option<usize>,
    #[arg(long = "max-n", short = 'N')]
    pub max_n: Option<usize>,
}

/// Optional TOML config; flags win over these keys.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub replications: Option<u64>,
    pub seed: Option<u64>,
    pub projection: Option<Vec<f64>>,
    pub max_order: Option<usize>,
    pub max_n: Option<usize>,
    pub method: Option<Method>,
    pub cap: Option<usize>,
    pub nodes: Option<usize>,
    pub inner_nodes: Option<usize>,
    pub k_max: Option<usize>,
    pub only: Option<Vec<u8>>,
    pub threads: Option<usize>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub stabilization_tol: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }
}

/// Resolved settings for one run, echoed into the envelope. Fields that do
/// not apply to the subcommand are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub max_n: Option<usize>,
    pub max_order: Option<usize>,
    pub replications: Option<u64>,
    pub seed: Option<u64>,
    pub projection: Option<Vec<f64>>,
    pub method: Option<Method>,
    pub compare: Option<bool>,
    pub cap: Option<usize>,
    pub exact: Option<bool>,
    pub nodes: Option<usize>,
    pub inner_nodes: Option<usize>,
    pub k_max: Option<usize>,
    pub only: Option<Vec<u8>>,
    pub stabilization_tol: Option<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// Not echoed: results do not depend on it.
    #[serde(skip)]
    pub threads: Option<usize>,
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("missing required --{flag}")))
}

impl RunConfig {
    pub fn resolve(cli: &Cli, file: &FileConfig) -> Result<Self> {
        let g = &cli.global;
        let mut rc = RunConfig {
            subcommand: cli.command.name().to_string(),
            format: g.format.or(file.format).unwrap_or_default(),
            output: g.output.clone().or_else(|| file.output.clone()),
            threads: g.threads.or(file.threads),
            ..Default::default()
        };
        let tol = g.stabilization_tol.or(file.stabilization_tol);
        match &cli.command {
            Command::Simulate(a) => {
                rc.n = Some(required(a.n.or(file.n), "n")?);
                rc.k = Some(required(a.k.or(file.k), "k")?);
                rc.replications = Some(a.replications.or(file.replications).unwrap_or(10_000));
                rc.seed = Some(a.seed.or(file.seed).unwrap_or(0));
                rc.projection = a.projection.clone().or_else(|| file.projection.clone());
                rc.max_order = Some(a.max_order.or(file.max_order).unwrap_or(4));
            }
            Command::Exact(a) => {
                let method = a.method.or(file.method).unwrap_or_default();
                rc.n = Some(required(a.n.or(file.n), "n")?);
                rc.k = Some(required(a.k.or(file.k), "k")?);
                rc.method = Some(method);
                rc.compare = Some(a.compare);
                rc.cap = Some(a.cap.or(file.cap).unwrap_or(match method {
                    Method::Split => crate::exact::DEFAULT_SPLIT_CAP,
                    Method::Direct => crate::exact::DEFAULT_DIRECT_CAP,
                }));
            }
            Command::Moments(a) => {
                rc.k = Some(required(a.k.or(file.k), "k")?);
                rc.max_n = Some(a.max_n.or(file.max_n).unwrap_or(200));
                rc.max_order = Some(
                    a.max_order
                        .or(file.max_order)
                        .unwrap_or(crate::moments::DEFAULT_MAX_ORDER),
                );
                rc.projection = a.projection.clone().or_else(|| file.projection.clone());
                rc.exact = Some(a.exact);
            }
            Command::Asympt(a) => {
                rc.k = Some(required(a.k.or(file.k), "k")?);
                rc.nodes = Some(
                    a.nodes
                        .or(file.nodes)
                        .unwrap_or(crate::asymptotics::DEFAULT_NODES),
                );
                rc.inner_nodes = Some(
                    a.inner_nodes
                        .or(file.inner_nodes)
                        .unwrap_or(crate::asymptotics::DEFAULT_INNER_NODES),
                );
                rc.max_n = Some(a.max_n.or(file.max_n).unwrap_or(200));
                rc.k_max = Some(
                    a.k_max
                        .or(file.k_max)
                        .unwrap_or(crate::asymptotics::DEFAULT_MAX_K),
                );
                rc.stabilization_tol = Some(tol.unwrap_or(crate::moments::STABILIZATION_TOL));
            }
            Command::Verify(a) => {
                let mut only = a
                    .only
                    .clone()
                    .or_else(|| file.only.clone())
                    .unwrap_or_else(|| crate::verify::ALL_CRITERIA.to_vec());
                only.sort_unstable();
                only.dedup();
                rc.only = Some(only);
            }
            Command::Report(a) => {
                rc.k_max = Some(
                    a.k_max
                        .or(file.k_max)
                        .unwrap_or(crate::asymptotics::DEFAULT_MAX_K),
                );
                rc.nodes = Some(
                    a.nodes
                        .or(file.nodes)
                        .unwrap_or(crate::asymptotics::DEFAULT_NODES),
                );
                rc.inner_nodes = Some(
                    a.inner_nodes
                        .or(file.inner_nodes)
                        .unwrap_or(crate::asymptotics::DEFAULT_INNER_NODES),
                );
                rc.max_n = Some(a.max_n.or(file.max_n).unwrap_or(200));
                rc.stabilization_tol = Some(tol.unwrap_or(crate::moments::STABILIZATION_TOL));
            }
        }
        rc.validate()?;
        Ok(rc)
    }

    fn validate(&self) -> Result<()> {
        if let Some(k) = self.k {
            if k < 2 {
                return Err(Error::InvalidParams {
                    n: self.n.unwrap_or(0),
                    k,
                });
            }
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidArgument(
                "--threads must be at least 1".into(),
            ));
        }
        if let Some(tol) = self.stabilization_tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::InvalidArgument(
                    "--stabilization-tol must be positive".into(),
                ));
            }
        }
        if let (Some(k), Some(k_max)) = (self.k, self.k_max) {
            if k > k_max {
                return Err(Error::CapExceeded {
                    what: "k",
                    n: k,
                    cap: k_max,
                });
            }
        }
        if let Some(only) = &self.only {
            if let Some(bad) = only
                .iter()
                .find(|id| !crate::verify::ALL_CRITERIA.contains(id))
            {
                return Err(Error::InvalidArgument(format!("unknown criterion {bad}")));
            }
        }
        Ok(())
    }

    /// Explicit `--output`, else `$SPACINGS_OUT_DIR/<subcommand>.<ext>`, else stdout.
    pub fn destination(&self) -> Option<PathBuf> {
        self.output.clone().or_else(|| {
            std::env::var_os(OUT_DIR_ENV).map(|dir| {
                PathBuf::from(dir).join(format!("{}.{}", self.subcommand, self.format.extension()))
            })
        })
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_TOLERANCE,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs a parsed command line; `Ok(false)` means a check failed.
pub fn execute(cli: &Cli) -> Result<bool> {
    let file = match &cli.global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let config = RunConfig::resolve(cli, &file)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let (payload, diagnostics, ok) = pool.install(|| commands::dispatch(&config))?;
    let envelope = ResultEnvelope::new(config, payload, diagnostics, cli.global.timestamp);
    match envelope.config.destination() {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                    path: parent.to_path_buf(),
                    source,
                })?;
            }
            write_result(&envelope, &path, envelope.config.format)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", render(&envelope, envelope.config.format)?),
    }
    Ok(ok)
}
