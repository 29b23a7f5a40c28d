//! Run configuration: a flat key = value text format with a version key.
//!
//! Serialization is canonical (fixed key order, pinned float formatting), so
//! parse ∘ serialize is the identity and serialize ∘ parse ∘ serialize is a
//! fixed point. Command-line flags override file values; defaults fill the
//! rest.

use std::fmt;

use fibising_core::dynamics::OrbitBudget;
use fibising_core::spectrum::ScanOptions;
use fibising_core::tracemap::CouplingParams;

use crate::output::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Coupling on letter A (dimensionless energy units).
    pub j0: f64,
    /// Coupling on letter B (dimensionless energy units).
    pub j1: f64,
    /// Band / oracle / cover level k.
    pub level: usize,
    /// Cover offset N; `None` = resolve automatically (<= max_offset).
    pub n_offset: Option<usize>,
    /// Largest probed offset for the automatic resolution.
    pub max_offset: usize,
    /// Scan window top on the s axis; `None` = (1 + max(J0,J1))^2 + 1.
    pub s_max: Option<f64>,
    /// Band scan density (points per unit s).
    pub grid_per_unit: f64,
    /// Band edge bisection tolerance (absolute, s units).
    pub edge_tol: f64,
    /// Extra x4 grid refinement rounds.
    pub max_refine_rounds: u32,
    /// Orbit iteration budget (steps).
    pub max_steps: usize,
    /// Escape threshold C for the bound-based criterion.
    pub escape_threshold: f64,
    /// Magnitude guard for trace iteration.
    pub overflow_guard: f64,
    /// Window count for local dimension profiles.
    pub windows: usize,
    /// Convergence study level range (inclusive).
    pub k_lo: usize,
    pub k_hi: usize,
    /// Coupling ratios for the dimension sweep (empty = skip).
    pub r_list: Vec<f64>,
    /// Invariant-surface levels V for the mesh export.
    pub surface_levels: Vec<f64>,
    /// Surface mesh resolution and (x, y) window.
    pub mesh_nx: usize,
    pub mesh_ny: usize,
    pub mesh_x_min: f64,
    pub mesh_x_max: f64,
    pub mesh_y_min: f64,
    pub mesh_y_max: f64,
    /// Grid size for the escape-time field.
    pub orbit_grid: usize,
    /// Containment inflation delta (s units).
    pub inflate: f64,
    /// Sample count for randomized suites.
    pub samples: usize,
    /// Worker threads for grid sweeps (output independent of the value).
    pub threads: usize,
    /// Seed for randomized identity checks.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            j0: 1.0,
            j1: 1.0,
            level: 8,
            n_offset: None,
            max_offset: 5,
            s_max: None,
            grid_per_unit: 2e4,
            edge_tol: 1e-12,
            max_refine_rounds: 2,
            max_steps: 10_000,
            escape_threshold: 1.0,
            overflow_guard: 1e150,
            windows: 8,
            k_lo: 1,
            k_hi: 8,
            r_list: Vec::new(),
            surface_levels: vec![0.0001, 0.01, 0.05, 1.0],
            mesh_nx: 201,
            mesh_ny: 201,
            mesh_x_min: -2.0,
            mesh_x_max: 2.0,
            mesh_y_min: -2.0,
            mesh_y_max: 2.0,
            orbit_grid: 2001,
            inflate: 1e-9,
            samples: 100,
            threads: 1,
            seed: 42,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    /// Validated coupling pair.
    pub fn params(&self) -> Result<CouplingParams, ConfigError> {
        CouplingParams::new(self.j0, self.j1)
            .map_err(|e| ConfigError(format!("invalid couplings: {e}")))
    }

    pub fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            s_max: self.s_max,
            grid_per_unit: self.grid_per_unit,
            edge_tol: self.edge_tol,
            max_refine_rounds: self.max_refine_rounds,
            overflow_guard: self.overflow_guard,
        }
    }

    pub fn budget(&self) -> Result<OrbitBudget, ConfigError> {
        OrbitBudget::new(self.max_steps, self.escape_threshold, self.overflow_guard)
            .map_err(|e| ConfigError(format!("invalid budget: {e}")))
    }

    /// Basic sanity checks beyond what the typed fields enforce.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params()?;
        self.budget()?;
        if self.level == 0 {
            return Err(ConfigError("level must be >= 1".into()));
        }
        if self.k_lo == 0 || self.k_hi < self.k_lo {
            return Err(ConfigError("need 1 <= k_lo <= k_hi".into()));
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.edge_tol) || !positive(self.grid_per_unit) {
            return Err(ConfigError(
                "tolerances and grid density must be positive".into(),
            ));
        }
        if let Some(s) = self.s_max {
            if !positive(s) {
                return Err(ConfigError("s_max must be positive".into()));
            }
        }
        if self.threads == 0 {
            return Err(ConfigError("threads must be >= 1".into()));
        }
        if self.windows == 0 {
            return Err(ConfigError("windows must be >= 1".into()));
        }
        Ok(())
    }

    /// Canonical key = value rendering (fixed order, units in comments).
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        s.push_str("# fibising run configuration\n");
        s.push_str("config_version = 1\n");
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("j0", fmt_f64(self.j0)); // coupling on letter A
        kv("j1", fmt_f64(self.j1)); // coupling on letter B
        kv("level", self.level.to_string());
        kv(
            "n_offset",
            match self.n_offset {
                Some(n) => n.to_string(),
                None => "auto".into(),
            },
        );
        kv("max_offset", self.max_offset.to_string());
        kv(
            "s_max",
            match self.s_max {
                Some(v) => fmt_f64(v),
                None => "auto".into(),
            },
        );
        kv("grid_per_unit", fmt_f64(self.grid_per_unit)); // points per unit s
        kv("edge_tol", fmt_f64(self.edge_tol)); // s units
        kv("max_refine_rounds", self.max_refine_rounds.to_string());
        kv("max_steps", self.max_steps.to_string());
        kv("escape_threshold", fmt_f64(self.escape_threshold));
        kv("overflow_guard", fmt_f64(self.overflow_guard));
        kv("windows", self.windows.to_string());
        kv("k_lo", self.k_lo.to_string());
        kv("k_hi", self.k_hi.to_string());
        kv("r_list", join_f64(&self.r_list));
        kv("surface_levels", join_f64(&self.surface_levels));
        kv("mesh_nx", self.mesh_nx.to_string());
        kv("mesh_ny", self.mesh_ny.to_string());
        kv("mesh_x_min", fmt_f64(self.mesh_x_min));
        kv("mesh_x_max", fmt_f64(self.mesh_x_max));
        kv("mesh_y_min", fmt_f64(self.mesh_y_min));
        kv("mesh_y_max", fmt_f64(self.mesh_y_max));
        kv("orbit_grid", self.orbit_grid.to_string());
        kv("inflate", fmt_f64(self.inflate)); // s units
        kv("samples", self.samples.to_string());
        kv("threads", self.threads.to_string());
        kv("seed", self.seed.to_string());
        s
    }

    /// Parse the key = value format; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut version_seen = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!(
                    "line {}: expected key = value",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| ConfigError(format!("line {}: bad {what}: {value}", lineno + 1));
            match key {
                "config_version" => {
                    if value != "1" {
                        return Err(ConfigError(format!("unsupported config_version {value}")));
                    }
                    version_seen = true;
                }
                "j0" => cfg.j0 = value.parse().map_err(|_| bad("float"))?,
                "j1" => cfg.j1 = value.parse().map_err(|_| bad("float"))?,
                "level" => cfg.level = value.parse().map_err(|_| bad("integer"))?,
                "n_offset" => {
                    cfg.n_offset = if value == "auto" {
                        None
                    } else {
                        Some(value.parse().map_err(|_| bad("offset"))?)
                    }
                }
                "max_offset" => cfg.max_offset = value.parse().map_err(|_| bad("integer"))?,
                "s_max" => {
                    cfg.s_max = if value == "auto" {
                        None
                    } else {
                        Some(value.parse().map_err(|_| bad("float"))?)
                    }
                }
                "grid_per_unit" => cfg.grid_per_unit = value.parse().map_err(|_| bad("float"))?,
                "edge_tol" => cfg.edge_tol = value.parse().map_err(|_| bad("float"))?,
                "max_refine_rounds" => {
                    cfg.max_refine_rounds = value.parse().map_err(|_| bad("integer"))?
                }
                "max_steps" => cfg.max_steps = value.parse().map_err(|_| bad("integer"))?,
                "escape_threshold" => {
                    cfg.escape_threshold = value.parse().map_err(|_| bad("float"))?
                }
                "overflow_guard" => cfg.overflow_guard = value.parse().map_err(|_| bad("float"))?,
                "windows" => cfg.windows = value.parse().map_err(|_| bad("integer"))?,
                "k_lo" => cfg.k_lo = value.parse().map_err(|_| bad("integer"))?,
                "k_hi" => cfg.k_hi = value.parse().map_err(|_| bad("integer"))?,
                "r_list" => cfg.r_list = split_f64(value).map_err(|_| bad("float list"))?,
                "surface_levels" => {
                    cfg.surface_levels = split_f64(value).map_err(|_| bad("float list"))?
                }
                "mesh_nx" => cfg.mesh_nx = value.parse().map_err(|_| bad("integer"))?,
                "mesh_ny" => cfg.mesh_ny = value.parse().map_err(|_| bad("integer"))?,
                "mesh_x_min" => cfg.mesh_x_min = value.parse().map_err(|_| bad("float"))?,
                "mesh_x_max" => cfg.mesh_x_max = value.parse().map_err(|_| bad("float"))?,
                "mesh_y_min" => cfg.mesh_y_min = value.parse().map_err(|_| bad("float"))?,
                "mesh_y_max" => cfg.mesh_y_max = value.parse().map_err(|_| bad("float"))?,
                "orbit_grid" => cfg.orbit_grid = value.parse().map_err(|_| bad("integer"))?,
                "inflate" => cfg.inflate = value.parse().map_err(|_| bad("float"))?,
                "samples" => cfg.samples = value.parse().map_err(|_| bad("integer"))?,
                "threads" => cfg.threads = value.parse().map_err(|_| bad("integer"))?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad("integer"))?,
                other => return Err(ConfigError(format!("unknown key `{other}`"))),
            }
        }
        if !version_seen {
            return Err(ConfigError("missing config_version".into()));
        }
        Ok(cfg)
    }
}

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| fmt_f64(*v))
        .collect::<Vec<_>>()
        .join(",")
}

fn split_f64(value: &str) -> Result<Vec<f64>, ()> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|tok| tok.trim().parse::<f64>().map_err(|_| ()))
        .collect()
}
