//! Command-line front end for the Fibonacci Ising spectrum toolkit.
//!
//! Subcommands: `bands`, `converge`, `dim`, `oracle`, `orbit`, `surface`,
//! `check`. Configuration comes from a flat key = value file plus flag
//! overrides; identical configurations produce byte-identical outputs.
//! Exit codes: 0 success, 1 failed identity check, 2 configuration error,
//! 3 numeric failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod checks;
pub mod commands;
pub mod config;
pub mod output;
pub mod rng;

use commands::CmdError;
use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "fibising",
    version,
    about = "Spectrum approximants of the Fibonacci quantum Ising chain via trace-map dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Band set, nested cover and energy-axis image at one level
    Bands(CommonArgs),
    /// Cover convergence table (Hausdorff distances and lengths) over levels
    Converge(CommonArgs),
    /// Box-counting dimension: windowed profile, global estimate, ratio sweep
    Dim(CommonArgs),
    /// Free-fermion ring spectrum with containment and recursion cross-checks
    Oracle(CommonArgs),
    /// Escape-time field over the spectral axis, optional orbit dump
    Orbit {
        #[command(flatten)]
        common: CommonArgs,
        /// Dump the forward orbit of the trace point "x,y,z"
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Invariant-surface meshes for a list of levels V
    Surface(CommonArgs),
    /// Run the identity suite; exit 1 if any residual exceeds its threshold
    Check(CommonArgs),
    /// Print the level-k substitution word as an ASCII string of A/B
    Word(CommonArgs),
}

/// Options shared by every subcommand. Flags override config-file values,
/// which override built-in defaults.
#[derive(Args)]
pub struct CommonArgs {
    /// Configuration file (flat key = value format)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for CSV/JSON files
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Coupling on letter A
    #[arg(long)]
    pub j0: Option<f64>,
    /// Coupling on letter B
    #[arg(long)]
    pub j1: Option<f64>,
    /// Band / cover / oracle level k
    #[arg(long)]
    pub level: Option<usize>,
    /// Cover offset N (omit for automatic resolution)
    #[arg(long)]
    pub n_offset: Option<usize>,
    /// Scan window top on the s axis
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Band scan density in points per unit s
    #[arg(long)]
    pub grid_per_unit: Option<f64>,
    /// Band edge tolerance (absolute)
    #[arg(long)]
    pub edge_tol: Option<f64>,
    /// Orbit iteration budget
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Window count for dimension profiles
    #[arg(long)]
    pub windows: Option<usize>,
    /// Convergence range lower level
    #[arg(long)]
    pub k_lo: Option<usize>,
    /// Convergence range upper level
    #[arg(long)]
    pub k_hi: Option<usize>,
    /// Coupling ratios for the dimension sweep (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub r_list: Option<Vec<f64>>,
    /// Worker threads (defaults to FIBISING_THREADS or 1)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Seed for randomized suites
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample count for randomized suites
    #[arg(long)]
    pub samples: Option<usize>,
    /// Containment inflation delta
    #[arg(long)]
    pub inflate: Option<f64>,
}

impl CommonArgs {
    /// Assemble the effective configuration: defaults, then the environment
    /// thread count, then the config file, then flag overrides.
    pub fn resolve(&self) -> Result<RunConfig, CmdError> {
        let mut cfg = RunConfig::default();
        if let Ok(value) = std::env::var("FIBISING_THREADS") {
            cfg.threads = value
                .parse()
                .map_err(|_| CmdError::Config(format!("bad FIBISING_THREADS value `{value}`")))?;
        }
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CmdError::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg = RunConfig::parse(&text).map_err(|e| CmdError::Config(e.to_string()))?;
        }
        if let Some(v) = self.j0 {
            cfg.j0 = v;
        }
        if let Some(v) = self.j1 {
            cfg.j1 = v;
        }
        if let Some(v) = self.level {
            cfg.level = v;
        }
        if let Some(v) = self.n_offset {
            cfg.n_offset = Some(v);
        }
        if let Some(v) = self.s_max {
            cfg.s_max = Some(v);
        }
        if let Some(v) = self.grid_per_unit {
            cfg.grid_per_unit = v;
        }
        if let Some(v) = self.edge_tol {
            cfg.edge_tol = v;
        }
        if let Some(v) = self.max_steps {
            cfg.max_steps = v;
        }
        if let Some(v) = self.windows {
            cfg.windows = v;
        }
        if let Some(v) = self.k_lo {
            cfg.k_lo = v;
        }
        if let Some(v) = self.k_hi {
            cfg.k_hi = v;
        }
        if let Some(v) = &self.r_list {
            cfg.r_list = v.clone();
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.inflate {
            cfg.inflate = v;
        }
        cfg.validate()
            .map_err(|e| CmdError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

fn parse_point(text: &str) -> Result<[f64; 3], CmdError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CmdError::Config(format!("expected `x,y,z`, got `{text}`")));
    }
    let mut out = [0.0f64; 3];
    for (slot, tok) in out.iter_mut().zip(parts.iter()) {
        *slot = tok
            .trim()
            .parse()
            .map_err(|_| CmdError::Config(format!("bad coordinate `{tok}`")))?;
    }
    Ok(out)
}

/// Run the parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Bands(common) => common
            .resolve()
            .and_then(|cfg| commands::cmd_bands(&cfg, &common.out)),
        Command::Converge(common) => common
            .resolve()
            .and_then(|cfg| commands::cmd_converge(&cfg, &common.out)),
        Command::Dim(common) => common
            .resolve()
            .and_then(|cfg| commands::cmd_dim(&cfg, &common.out)),
        Command::Oracle(common) => common
            .resolve()
            .and_then(|cfg| commands::cmd_oracle(&cfg, &common.out)),
        Command::Orbit { common, point } => common.resolve().and_then(|cfg| {
            let parsed = match point {
                Some(text) => Some(parse_point(text)?),
                None => None,
            };
            commands::cmd_orbit(&cfg, &common.out, parsed)
        }),
        Command::Surface(common) => common
            .resolve()
            .and_then(|cfg| commands::cmd_surface(&cfg, &common.out)),
        Command::Check(common) => common.resolve().and_then(|cfg| commands::cmd_check(&cfg)),
        Command::Word(common) => common.resolve().and_then(|cfg| commands::cmd_word(&cfg)),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
