//! `copolypin`: command-line front end for the copolymer-with-pinning
//! toolkit. Every run is a pure function of the resolved configuration and
//! seed, so rerunning a command reproduces its artifacts byte for byte.

#![forbid(unsafe_code)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{DisorderSpec, RhoSpec, RunConfig};

/// Errors surfaced to the shell. Configuration mistakes exit with code 2,
/// numerical failures with code 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<copolypin::AnnealedError> for CliError {
    fn from(e: copolypin::AnnealedError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<copolypin::QuenchedError> for CliError {
    fn from(e: copolypin::QuenchedError) -> Self {
        match e {
            copolypin::QuenchedError::NoBracket => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<copolypin::BoundsError> for CliError {
    fn from(e: copolypin::BoundsError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<copolypin::VariationalError> for CliError {
    fn from(e: copolypin::VariationalError) -> Self {
        match e {
            copolypin::VariationalError::DegenerateCertificate { .. } => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "copolypin", version, about = "Copolymer-with-pinning toolkit", long_about = None)]
struct Cli {
    /// JSON run configuration; explicit flags override file values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master seed for every random draw.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, 0 for the machine default; COPOLYPIN_THREADS is
    /// honored when the flag is absent.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Series and root-finding tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Output file. CSV subcommands print to stdout without it.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact annealed quantities: free energy, thresholds, critical curve.
    Annealed {
        #[command(subcommand)]
        cmd: AnnealedCmd,
    },
    /// Replica estimates of the quenched free energy and path statistics.
    Quenched {
        #[command(subcommand)]
        cmd: QuenchedCmd,
    },
    /// Rigorous bounds on the quenched critical curve.
    Bounds {
        #[command(subcommand)]
        cmd: BoundsCmd,
    },
    /// Finite-alphabet variational functionals and gap certificates.
    Variational {
        #[command(subcommand)]
        cmd: VariationalCmd,
    },
    /// Phase-diagram scan: curves, bounds, and wetting thresholds on one grid.
    Scan {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        size: SizeArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Subcommand, Debug)]
enum AnnealedCmd {
    /// Solve one parameter point and emit a JSON report.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Critical-curve CSV over a pinning-penalty grid.
    Curve {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Subcommand, Debug)]
enum QuenchedCmd {
    /// Free-energy estimate across the volume grid (CSV).
    Estimate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        size: SizeArgs,
    },
    /// Pseudo-critical copolymer bias over a pinning-penalty grid (CSV).
    Curve {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        size: SizeArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sample polymer paths from one quenched measure (JSON).
    Paths {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        size: SizeArgs,
        /// Number of paths to draw.
        #[arg(long)]
        paths: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum BoundsCmd {
    /// Monthus line, fractional-moment bound, annealed curve, and a
    /// quenched estimate per grid point (CSV).
    Curve {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        size: SizeArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Subcommand, Debug)]
enum VariationalCmd {
    /// Evaluate the finite-alphabet maximizer against the closed form (JSON).
    Check {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        var: VarArgs,
    },
    /// Entropy-gap certificate at the annealed critical bias (JSON).
    Gap {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        var: VarArgs,
    },
}

#[derive(Args, Debug, Default)]
struct ModelArgs {
    /// Copolymer coupling.
    #[arg(long, allow_negative_numbers = true)]
    beta_hat: Option<f64>,
    /// Copolymer bias.
    #[arg(long, allow_negative_numbers = true)]
    h_hat: Option<f64>,
    /// Pinning coupling.
    #[arg(long, allow_negative_numbers = true)]
    beta_bar: Option<f64>,
    /// Pinning penalty.
    #[arg(long, allow_negative_numbers = true)]
    h_bar: Option<f64>,
    /// Excursion law: srw[:CUTOFF], power:ALPHA[:CUTOFF], table:P1,P2,...,
    /// or inline JSON.
    #[arg(long)]
    rho: Option<String>,
    /// Letter law for both disorder sequences unless --disorder-bar is
    /// given: pm1, gaussian, or discrete JSON.
    #[arg(long)]
    disorder: Option<String>,
    /// Letter law for the pinning sequence alone.
    #[arg(long)]
    disorder_bar: Option<String>,
    /// Tail exponent override for laws that do not expose one.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
}

impl ModelArgs {
    fn apply(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        if let Some(x) = self.beta_hat {
            cfg.model.beta_hat = x;
        }
        if let Some(x) = self.h_hat {
            cfg.model.h_hat = x;
        }
        if let Some(x) = self.beta_bar {
            cfg.model.beta_bar = x;
        }
        if let Some(x) = self.h_bar {
            cfg.model.h_bar = x;
        }
        if let Some(text) = &self.rho {
            cfg.rho = RhoSpec::parse_flag(text)?;
        }
        if let Some(text) = &self.disorder {
            let spec = DisorderSpec::parse_flag(text)?;
            cfg.disorder_hat = spec.clone();
            cfg.disorder_bar = spec;
        }
        if let Some(text) = &self.disorder_bar {
            cfg.disorder_bar = DisorderSpec::parse_flag(text)?;
        }
        if let Some(a) = self.alpha {
            cfg.alpha = Some(a);
        }
        Ok(())
    }
}

#[derive(Args, Debug, Default)]
struct SizeArgs {
    /// Largest chain length.
    #[arg(long)]
    n: Option<usize>,
    /// Number of disorder replicas.
    #[arg(long)]
    replicas: Option<usize>,
}

impl SizeArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(r) = self.replicas {
            cfg.replicas = r;
        }
    }
}

#[derive(Args, Debug, Default)]
struct GridArgs {
    /// First value of the pinning-penalty grid.
    #[arg(long, allow_negative_numbers = true)]
    grid_start: Option<f64>,
    /// Last value of the pinning-penalty grid.
    #[arg(long, allow_negative_numbers = true)]
    grid_stop: Option<f64>,
    /// Number of grid points; 0 writes a header-only CSV.
    #[arg(long)]
    grid_points: Option<usize>,
}

impl GridArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(x) = self.grid_start {
            cfg.grid.start = x;
        }
        if let Some(x) = self.grid_stop {
            cfg.grid.stop = x;
        }
        if let Some(p) = self.grid_points {
            cfg.grid.points = p;
        }
    }
}

#[derive(Args, Debug, Default)]
struct VarArgs {
    /// Excess free energy at which to evaluate the functional.
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Word-length truncation for the gap certificate.
    #[arg(long)]
    tr: Option<usize>,
    /// Longest excursion kept by the finite maximizer.
    #[arg(long)]
    max_len: Option<usize>,
}

impl VarArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(g) = self.g {
            cfg.g = Some(g);
        }
        if let Some(tr) = self.tr {
            cfg.tr = tr;
        }
        if let Some(m) = self.max_len {
            cfg.max_len = m;
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("copolypin: {err}");
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = base_config(&cli)?;
    match &cli.command {
        Command::Annealed { cmd } => match cmd {
            AnnealedCmd::Solve { model } => {
                model.apply(&mut cfg)?;
                finalize(&mut cfg)?;
                commands::annealed_solve(&cfg)
            }
            AnnealedCmd::Curve { model, grid } => {
                model.apply(&mut cfg)?;
                grid.apply(&mut cfg);
                finalize(&mut cfg)?;
                commands::annealed_curve(&cfg)
            }
        },
        Command::Quenched { cmd } => match cmd {
            QuenchedCmd::Estimate { model, size } => {
                model.apply(&mut cfg)?;
                size.apply(&mut cfg);
                finalize(&mut cfg)?;
                commands::quenched_estimate(&cfg)
            }
            QuenchedCmd::Curve { model, size, grid } => {
                model.apply(&mut cfg)?;
                size.apply(&mut cfg);
                grid.apply(&mut cfg);
                finalize(&mut cfg)?;
                commands::quenched_curve(&cfg)
            }
            QuenchedCmd::Paths { model, size, paths } => {
                model.apply(&mut cfg)?;
                size.apply(&mut cfg);
                if let Some(p) = paths {
                    cfg.paths = *p;
                }
                finalize(&mut cfg)?;
                commands::quenched_paths(&cfg)
            }
        },
        Command::Bounds { cmd } => match cmd {
            BoundsCmd::Curve { model, size, grid } => {
                model.apply(&mut cfg)?;
                size.apply(&mut cfg);
                grid.apply(&mut cfg);
                finalize(&mut cfg)?;
                commands::bounds_curve(&cfg)
            }
        },
        Command::Variational { cmd } => match cmd {
            VariationalCmd::Check { model, var } => {
                model.apply(&mut cfg)?;
                var.apply(&mut cfg);
                finalize(&mut cfg)?;
                commands::variational_check(&cfg)
            }
            VariationalCmd::Gap { model, var } => {
                model.apply(&mut cfg)?;
                var.apply(&mut cfg);
                finalize(&mut cfg)?;
                commands::variational_gap(&cfg)
            }
        },
        Command::Scan { model, size, grid } => {
            model.apply(&mut cfg)?;
            size.apply(&mut cfg);
            grid.apply(&mut cfg);
            finalize(&mut cfg)?;
            commands::scan(&cfg)
        }
    }
}

/// Resolves the layered configuration: defaults, then the config file,
/// then the environment, then explicit flags.
fn base_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Ok(env) = std::env::var("COPOLYPIN_THREADS") {
        cfg.threads = env
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad COPOLYPIN_THREADS value '{env}'")))?;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    if let Some(path) = &cli.output {
        cfg.output = Some(path.display().to_string());
    }
    Ok(cfg)
}

/// Final sanity checks plus worker-pool setup, once all layers are merged.
fn finalize(cfg: &mut RunConfig) -> Result<(), CliError> {
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        return Err(CliError::Config(format!(
            "tolerance must be a positive finite number, got {}",
            cfg.tol
        )));
    }
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build_global();
    Ok(())
}
