//! Implementation of the subcommands: orchestration, file output, exit
//! codes. All numeric work lives in the core crate; this module only
//! sequences it and writes deterministic CSV/JSON.

use std::fs;
use std::path::{Path, PathBuf};

use fibising_core::dynamics::{classify_orbit, OrbitStatus, SGrid};
use fibising_core::error::CoreError;
use fibising_core::fermion::{
    build_matrices, containment_check, direct_transfer_product, oracle_spectrum, ring_band_check,
};
use fibising_core::fractal::{box_dimension, default_schedule, local_dimension_profile};
use fibising_core::rel_residual;
use fibising_core::spectrum::{
    band_set, convergence_study, nested_cover, resolve_offset, resolve_offset_shrinking,
    symmetrize_to_energy, trace_value_with_guard, BandSet, ScanOptions, TraceEval,
};
use fibising_core::tracemap::{
    fricke_vogt, gamma_line, surface_mesh, trace_map, CouplingParams, MeshResolution, MeshWindow,
    SpectralVariable, SurfaceLevel, TracePoint,
};

use crate::checks::{all_passed, identity_suite};
use crate::config::RunConfig;
use crate::output::{write_atomic, Csv, Field, Json};
use crate::rng::SplitMix64;

/// Command failure, carrying the process exit code.
#[derive(Debug)]
pub enum CmdError {
    /// Invalid configuration or domain precondition (exit 2).
    Config(String),
    /// Numeric failure: overflow, eigensolver divergence, unresolved
    /// nesting (exit 3).
    Numeric(String),
    /// The identity suite found a residual over threshold (exit 1).
    CheckFailed,
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::CheckFailed => 1,
            CmdError::Config(_) => 2,
            CmdError::Numeric(_) => 3,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CmdError::CheckFailed => "identity suite failed".into(),
            CmdError::Config(m) => m.clone(),
            CmdError::Numeric(m) => m.clone(),
        }
    }
}

fn core_err(e: CoreError) -> CmdError {
    match e {
        CoreError::UncertifiedOverflow { .. }
        | CoreError::EigenDiverged { .. }
        | CoreError::NestingUnresolved { .. } => CmdError::Numeric(e.to_string()),
        other => CmdError::Config(other.to_string()),
    }
}

fn io_err(e: std::io::Error, path: &Path) -> CmdError {
    CmdError::Config(format!("cannot write {}: {e}", path.display()))
}

fn ensure_out_dir(out: &Path) -> Result<(), CmdError> {
    fs::create_dir_all(out).map_err(|e| io_err(e, out))
}

fn write_file(out: &Path, name: &str, contents: &str) -> Result<PathBuf, CmdError> {
    let path = out.join(name);
    write_atomic(&path, contents).map_err(|e| io_err(e, &path))?;
    Ok(path)
}

/// Offset resolution: explicit value, else the shrinking probe, else the
/// plain nesting probe (uniform chains never shrink strictly).
fn resolve_cover_offset(
    params: &CouplingParams,
    cfg: &RunConfig,
    k_max: usize,
    opts: &ScanOptions,
) -> Result<usize, CmdError> {
    if let Some(n) = cfg.n_offset {
        return Ok(n);
    }
    match resolve_offset_shrinking(params, k_max, cfg.max_offset, opts) {
        Ok(n) => Ok(n),
        Err(CoreError::NestingUnresolved { .. }) => {
            resolve_offset(params, k_max, cfg.max_offset, opts).map_err(core_err)
        }
        Err(e) => Err(core_err(e)),
    }
}

fn band_rows(csv: &mut Csv, level: usize, bands: &BandSet) {
    for iv in bands.intervals() {
        csv.row(&[Field::U(level as u64), Field::F(iv.lo), Field::F(iv.hi)]);
    }
}

fn params_meta(cfg: &RunConfig) -> Vec<(&'static str, Json)> {
    vec![
        ("j0", Json::Num(cfg.j0)),
        ("j1", Json::Num(cfg.j1)),
        ("edge_tol", Json::Num(cfg.edge_tol)),
        ("grid_per_unit", Json::Num(cfg.grid_per_unit)),
    ]
}

// ───────────────────────────────────────────────────────────────────
//  bands
// ───────────────────────────────────────────────────────────────────

pub fn cmd_bands(cfg: &RunConfig, out: &Path) -> Result<(), CmdError> {
    let params = cfg.params().map_err(|e| CmdError::Config(e.to_string()))?;
    let opts = cfg.scan_options();
    ensure_out_dir(out)?;

    let sigma = band_set(&params, cfg.level, &opts).map_err(core_err)?;
    let offset = resolve_cover_offset(&params, cfg, cfg.level, &opts)?;
    let cover = nested_cover(&params, cfg.level, offset, &opts).map_err(core_err)?;
    let energy = symmetrize_to_energy(&sigma).map_err(core_err)?;

    let mut csv = Csv::new("level,a,b");
    band_rows(&mut csv, cfg.level, &sigma);
    write_file(out, "bands_sigma.csv", &csv.finish())?;

    let mut csv = Csv::new("level,a,b");
    band_rows(&mut csv, cfg.level, &cover.bands);
    write_file(out, "bands_cover.csv", &csv.finish())?;

    let mut csv = Csv::new("level,a,b");
    band_rows(&mut csv, cfg.level, &energy);
    write_file(out, "bands_energy.csv", &csv.finish())?;

    let mut meta = params_meta(cfg);
    meta.push(("command", Json::Str("bands".into())));
    meta.push(("level", Json::Int(cfg.level as i64)));
    meta.push(("n_offset", Json::Int(offset as i64)));
    meta.push(("s_max", Json::Num(opts.resolved_s_max(&params))));
    meta.push(("sigma_intervals", Json::Int(sigma.intervals().len() as i64)));
    meta.push(("sigma_length", Json::Num(sigma.total_length())));
    meta.push((
        "cover_intervals",
        Json::Int(cover.bands.intervals().len() as i64),
    ));
    meta.push(("cover_length", Json::Num(cover.bands.total_length())));
    write_file(out, "bands_meta.json", &Json::obj(meta).render())?;

    println!(
        "bands: level {} -> {} bands (length {:.6}), cover N={} -> {} bands",
        cfg.level,
        sigma.intervals().len(),
        sigma.total_length(),
        offset,
        cover.bands.intervals().len()
    );
    Ok(())
}

// ───────────────────────────────────────────────────────────────────
//  converge
// ───────────────────────────────────────────────────────────────────

pub fn cmd_converge(cfg: &RunConfig, out: &Path) -> Result<(), CmdError> {
    let params = cfg.params().map_err(|e| CmdError::Config(e.to_string()))?;
    let opts = cfg.scan_options();
    ensure_out_dir(out)?;

    let offset = resolve_cover_offset(&params, cfg, cfg.k_hi, &opts)?;
    let rows = convergence_study(&params, cfg.k_lo, cfg.k_hi, offset, &opts).map_err(core_err)?;

    let mut csv = Csv::new("k,hausdorff,length");
    for row in &rows {
        csv.row(&[
            Field::U(row.k as u64),
            match row.dist_to_next {
                Some(d) => Field::F(d),
                None => Field::Empty,
            },
            Field::F(row.total_length),
        ]);
    }
    write_file(out, "converge.csv", &csv.finish())?;

    let mut meta = params_meta(cfg);
    meta.push(("command", Json::Str("converge".into())));
    meta.push(("k_lo", Json::Int(cfg.k_lo as i64)));
    meta.push(("k_hi", Json::Int(cfg.k_hi as i64)));
    meta.push(("n_offset", Json::Int(offset as i64)));
    write_file(out, "converge_meta.json", &Json::obj(meta).render())?;

    for row in &rows {
        match row.dist_to_next {
            Some(d) => println!(
                "k={}: length {:.6}, dist to next {:.3e}",
                row.k, row.total_length, d
            ),
            None => println!("k={}: length {:.6}", row.k, row.total_length),
        }
    }
    Ok(())
}

// ───────────────────────────────────────────────────────────────────
//  dim
// ───────────────────────────────────────────────────────────────────

pub fn cmd_dim(cfg: &RunConfig, out: &Path) -> Result<(), CmdError> {
    let params = cfg.params().map_err(|e| CmdError::Config(e.to_string()))?;
    let opts = cfg.scan_options();
    ensure_out_dir(out)?;

    // Windowed profile over the level-k band set.
    let profile =
        local_dimension_profile(&params, cfg.level, Some(cfg.windows), &opts).map_err(core_err)?;
    let mut csv = Csv::new("center,halfwidth,dim,stderr");
    for w in &profile.windows {
        match &w.estimate {
            Some(est) => csv.row(&[
                Field::F(w.center),
                Field::F(w.half_width),
                Field::F(est.value),
                Field::F(est.stderr),
            ]),
            None => csv.row(&[
                Field::F(w.center),
                Field::F(w.half_width),
                Field::Empty,
                Field::Empty,
            ]),
        }
    }
    write_file(out, "dim_profile.csv", &csv.finish())?;

    // Global estimate on the nested cover.
    let offset = resolve_cover_offset(&params, cfg, cfg.level, &opts)?;
    let cover = nested_cover(&params, cfg.level, offset, &opts).map_err(core_err)?;
    let schedule = default_schedule(&cover.bands);
    if schedule.len() < 4 {
        return Err(CmdError::Numeric(
            "cover too coarse for a dimension fit".into(),
        ));
    }
    let global = box_dimension(&cover.bands, &schedule).map_err(core_err)?;

    let mut csv = Csv::new("level,dim,stderr,eps_min,eps_max");
    csv.row(&[
        Field::U(cfg.level as u64),
        Field::F(global.value),
        Field::F(global.stderr),
        Field::F(global.eps_range.0),
        Field::F(global.eps_range.1),
    ]);
    write_file(out, "dim_global.csv", &csv.finish())?;

    let mut csv = Csv::new("eps,N");
    for (eps, n) in &global.counts {
        csv.row(&[Field::F(*eps), Field::U(*n)]);
    }
    write_file(out, "dim_counts.csv", &csv.finish())?;

    // Parameter sweep at fixed J1, offset resolved per ratio.
    if !cfg.r_list.is_empty() {
        let mut csv = Csv::new("r,dim,stderr");
        for &r in &cfg.r_list {
            let p_r = CouplingParams::new(r * cfg.j1, cfg.j1).map_err(core_err)?;
            let off_r = resolve_cover_offset(&p_r, cfg, cfg.level, &opts)?;
            let cover_r = nested_cover(&p_r, cfg.level, off_r, &opts).map_err(core_err)?;
            let sched_r = default_schedule(&cover_r.bands);
            if sched_r.len() < 4 {
                return Err(CmdError::Numeric(format!(
                    "cover at r={r} too coarse for a fit"
                )));
            }
            let est = box_dimension(&cover_r.bands, &sched_r).map_err(core_err)?;
            csv.row(&[Field::F(r), Field::F(est.value), Field::F(est.stderr)]);
        }
        write_file(out, "dim_sweep.csv", &csv.finish())?;
    }

    let mut meta = params_meta(cfg);
    meta.push(("command", Json::Str("dim".into())));
    meta.push(("level", Json::Int(cfg.level as i64)));
    meta.push(("n_offset", Json::Int(offset as i64)));
    meta.push(("windows", Json::Int(cfg.windows as i64)));
    meta.push(("global_dim", Json::Num(global.value)));
    meta.push(("global_stderr", Json::Num(global.stderr)));
    write_file(out, "dim_meta.json", &Json::obj(meta).render())?;

    println!(
        "dim: level {} global estimate {:.4} ± {:.4} ({} windows)",
        cfg.level,
        global.value,
        global.stderr,
        profile.windows.len()
    );
    Ok(())
}

// ───────────────────────────────────────────────────────────────────
//  oracle
// ───────────────────────────────────────────────────────────────────

pub fn cmd_oracle(cfg: &RunConfig, out: &Path) -> Result<(), CmdError> {
    let params = cfg.params().map_err(|e| CmdError::Config(e.to_string()))?;
    let opts = cfg.scan_options();
    ensure_out_dir(out)?;

    let matrices = build_matrices(&params, cfg.level).map_err(core_err)?;
    let spectrum = oracle_spectrum(&matrices).map_err(core_err)?;

    let mut csv = Csv::new("mu,s,E_plus,E_minus");
    for (&mu, &s) in spectrum.mu.iter().zip(spectrum.s_values.iter()) {
        let e = 2.0 * s.max(0.0).sqrt();
        csv.row(&[Field::F(mu), Field::F(s), Field::F(e), Field::F(-e)]);
    }
    write_file(out, "oracle.csv", &csv.finish())?;

    let containment =
        containment_check(&params, cfg.level, cfg.inflate, &opts).map_err(core_err)?;
    let ring = ring_band_check(&params, cfg.level, 1e-6).map_err(core_err)?;

    // Transfer-product vs trace-recursion equivalence at the configured
    // couplings; the guard is wide so deep levels stay representable.
    let mut rng = SplitMix64::new(cfg.seed);
    let s_top = opts.resolved_s_max(&params);
    let mut max_resid = 0.0f64;
    for _ in 0..cfg.samples {
        let s = SpectralVariable::new(rng.uniform(0.0, s_top)).expect("nonnegative");
        for k in 1..=12usize {
            let product = direct_transfer_product(&params, k, s).map_err(core_err)?;
            match trace_value_with_guard(&params, s, k as i64, 1e290).map_err(core_err)? {
                TraceEval::Value(x) => {
                    max_resid = max_resid.max(rel_residual(product.half_trace(), x));
                }
                TraceEval::Overflowed => {
                    return Err(CmdError::Numeric(format!(
                        "trace overflow at k={k}, s={}",
                        s.value()
                    )))
                }
            }
        }
    }

    // Seed matrices at s = 1, row-major, for external comparison.
    let (m_m1, m0, m1) =
        fibising_core::tracemap::seed_matrices(&params, SpectralVariable::new(1.0).expect("s = 1"));
    let matrix_json = |m: &fibising_core::tracemap::TransferMatrix| {
        Json::List(m.m.iter().flatten().map(|&v| Json::Num(v)).collect())
    };

    let meta = Json::obj(vec![
        ("command", Json::Str("oracle".into())),
        ("j0", Json::Num(cfg.j0)),
        ("j1", Json::Num(cfg.j1)),
        ("level", Json::Int(cfg.level as i64)),
        ("lattice_size", Json::Int(matrices.size() as i64)),
        ("seed_matrix_m_minus1_at_s1", matrix_json(&m_m1)),
        ("seed_matrix_m0_at_s1", matrix_json(&m0)),
        ("seed_matrix_m1_at_s1", matrix_json(&m1)),
        ("inflate", Json::Num(cfg.inflate)),
        ("containment_total", Json::Int(containment.total as i64)),
        ("containment_inside", Json::Int(containment.inside as i64)),
        ("containment_fraction", Json::Num(containment.fraction())),
        (
            "containment_violators",
            Json::List(
                containment
                    .violators
                    .iter()
                    .map(|&v| Json::Num(v))
                    .collect(),
            ),
        ),
        ("same_cell_fraction", Json::Num(ring.fraction())),
        ("equivalence_samples", Json::Int(cfg.samples as i64)),
        ("equivalence_max_rel_err", Json::Num(max_resid)),
    ]);
    write_file(out, "oracle_report.json", &meta.render())?;

    println!(
        "oracle: F_k = {} sites, containment {:.4} (same-cell {:.4}), max recursion residual {:.3e}",
        matrices.size(),
        containment.fraction(),
        ring.fraction(),
        max_resid
    );
    Ok(())
}

// ───────────────────────────────────────────────────────────────────
//  orbit
// ───────────────────────────────────────────────────────────────────

/// Chunked deterministic parallel map: output order is input order
/// regardless of the thread count.
fn parallel_rows<T, R, F>(items: &[T], threads: usize, f: F) -> Result<Vec<R>, CmdError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, CmdError> + Sync,
{
    let threads = threads.max(1).min(items.len().max(1));
    if threads <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let chunks: Vec<&[T]> = items.chunks(chunk).collect();
    let mut results: Vec<Result<Vec<R>, CmdError>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for part in &chunks {
            let f_ref = &f;
            handles.push(scope.spawn(move || part.iter().map(f_ref).collect()));
        }
        for handle in handles {
            results.push(handle.join().expect("worker panicked"));
        }
    });
    let mut out = Vec::with_capacity(items.len());
    for chunk in results {
        out.extend(chunk?);
    }
    Ok(out)
}

pub fn cmd_orbit(cfg: &RunConfig, out: &Path, point: Option<[f64; 3]>) -> Result<(), CmdError> {
    let params = cfg.params().map_err(|e| CmdError::Config(e.to_string()))?;
    let opts = cfg.scan_options();
    let budget = cfg.budget().map_err(|e| CmdError::Config(e.to_string()))?;
    ensure_out_dir(out)?;

    let s_top = opts.resolved_s_max(&params);
    let grid = SGrid::new(0.0, s_top, cfg.orbit_grid).map_err(core_err)?;
    let points: Vec<f64> = grid.points().collect();
    let rows = parallel_rows(&points, cfg.threads, |&s| {
        let sv = SpectralVariable::new(s).map_err(core_err)?;
        let verdict = classify_orbit(gamma_line(&params, sv), &budget).map_err(core_err)?;
        Ok((s, verdict))
    })?;

    let mut csv = Csv::new("s,status,steps");
    for (s, verdict) in &rows {
        let (status, steps) = match verdict.status {
            OrbitStatus::Escaped { step, .. } => ("E", step as u64),
            OrbitStatus::UndecidedBounded { .. } => ("U", verdict.steps_used as u64),
        };
        csv.row(&[Field::F(*s), Field::S(status.into()), Field::U(steps)]);
    }
    write_file(out, "orbit_field.csv", &csv.finish())?;

    let escaped = rows.iter().filter(|(_, v)| v.status.is_escaped()).count();
    println!(
        "orbit: {} grid points, {} escaped, {} undecided",
        rows.len(),
        escaped,
        rows.len() - escaped
    );

    if let Some([x, y, z]) = point {
        let mut csv = Csv::new("step,x,y,z,I");
        let mut cur = TracePoint::new(x, y, z);
        if !cur.is_finite() {
            return Err(CmdError::Config("orbit point must be finite".into()));
        }
        for step in 0..=cfg.max_steps {
            csv.row(&[
                Field::U(step as u64),
                Field::F(cur.x),
                Field::F(cur.y),
                Field::F(cur.z),
                Field::F(fricke_vogt(cur)),
            ]);
            cur = trace_map(cur);
            if !cur.is_finite() || cur.max_abs() > cfg.overflow_guard {
                break;
            }
        }
        write_file(out, "orbit_dump.csv", &csv.finish())?;
        let verdict = classify_orbit(TracePoint::new(x, y, z), &budget).map_err(core_err)?;
        match verdict.status {
            OrbitStatus::Escaped { step, .. } => {
                println!("point ({x},{y},{z}): escaped at step {step}")
            }
            OrbitStatus::UndecidedBounded { .. } => {
                println!(
                    "point ({x},{y},{z}): undecided within {} steps",
                    budget.max_steps
                )
            }
        }
    }
    Ok(())
}

// ───────────────────────────────────────────────────────────────────
//  surface
// ───────────────────────────────────────────────────────────────────

pub fn cmd_surface(cfg: &RunConfig, out: &Path) -> Result<(), CmdError> {
    ensure_out_dir(out)?;
    let window = MeshWindow {
        x_min: cfg.mesh_x_min,
        x_max: cfg.mesh_x_max,
        y_min: cfg.mesh_y_min,
        y_max: cfg.mesh_y_max,
    };
    let res = MeshResolution {
        nx: cfg.mesh_nx,
        ny: cfg.mesh_ny,
    };

    let mut csv = Csv::new("x,y,z,V");
    let mut total = 0usize;
    for &v in &cfg.surface_levels {
        let level = SurfaceLevel::new(v).map_err(core_err)?;
        let mesh = surface_mesh(level, res, window);
        total += mesh.len();
        for p in &mesh {
            csv.row(&[Field::F(p.x), Field::F(p.y), Field::F(p.z), Field::F(v)]);
        }
    }
    write_file(out, "surface.csv", &csv.finish())?;
    println!(
        "surface: {} samples across {} levels",
        total,
        cfg.surface_levels.len()
    );
    Ok(())
}

// ───────────────────────────────────────────────────────────────────
//  word
// ───────────────────────────────────────────────────────────────────

pub fn cmd_word(cfg: &RunConfig) -> Result<(), CmdError> {
    let word = fibising_core::fibword::word_at_level(cfg.level).map_err(core_err)?;
    println!("{}", word.to_ascii());
    Ok(())
}

// ───────────────────────────────────────────────────────────────────
//  check
// ───────────────────────────────────────────────────────────────────

pub fn cmd_check(cfg: &RunConfig) -> Result<(), CmdError> {
    let rows = identity_suite(cfg.seed);
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for row in &rows {
        println!(
            "{:<width$}  residual {:>12.3e}  threshold {:>8.0e}  {}",
            row.name,
            row.residual,
            row.threshold,
            if row.passed() { "ok" } else { "FAIL" },
        );
    }
    if all_passed(&rows) {
        println!("all {} identities hold", rows.len());
        Ok(())
    } else {
        Err(CmdError::CheckFailed)
    }
}
