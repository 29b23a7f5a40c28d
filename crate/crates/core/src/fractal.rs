//! Box-counting dimension estimation for band approximants.
//!
//! N(ε) counts the half-open grid boxes [jε, (j+1)ε) that meet the interval
//! union; the dimension estimate is the least-squares slope of log N against
//! log 1/ε over a geometric ε schedule. A level-k band set is a finite union
//! of intervals, so the slope is only meaningful above the approximation
//! scale: the default schedule floors ε at four times the narrowest band.
//!
//! Estimates carry the level in their metadata and make no claim about the
//! k → ∞ limit.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math;
use crate::spectrum::{band_set, nested_cover, BandSet, Interval, ScanOptions};
use crate::tracemap::CouplingParams;

/// Result of a log–log slope fit.
#[derive(Debug, Clone)]
pub struct DimensionEstimate {
    /// Fitted slope clamped into [0, 1] (subsets of the line).
    pub value: f64,
    /// Unclamped slope.
    pub raw_slope: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    /// (ε_min, ε_max) of the schedule actually used.
    pub eps_range: (f64, f64),
    /// The (ε, N(ε)) pairs entering the fit.
    pub counts: Vec<(f64, u64)>,
}

/// Number of grid boxes [jε, (j+1)ε) intersecting the union.
///
/// Computed exactly from the endpoints by integer arithmetic on floor(a/ε)
/// and floor(b/ε). A right endpoint landing exactly on a box boundary does
/// not open the next box (half-open convention), except for degenerate
/// single-point intervals which always occupy the box they start.
pub fn box_count(bands: &BandSet, eps: f64) -> Result<u64> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(CoreError::Domain("box size must be positive and finite"));
    }
    let mut count = 0u64;
    let mut last_counted = i64::MIN;
    for iv in bands.intervals() {
        let j_lo = math::floor(iv.lo / eps) as i64;
        let q = iv.hi / eps;
        let f = math::floor(q);
        let mut j_hi = f as i64;
        if f == q && iv.hi > iv.lo {
            j_hi -= 1;
        }
        let j_hi = j_hi.max(j_lo);
        let start = j_lo.max(last_counted.saturating_add(1));
        if j_hi >= start {
            count += (j_hi - start + 1) as u64;
        }
        last_counted = last_counted.max(j_hi);
    }
    Ok(count)
}

/// Least-squares slope of log N(ε) versus log 1/ε over the given schedule.
///
/// The schedule must hold at least four distinct, strictly decreasing,
/// positive values. The raw slope is clamped into [0, 1] for the headline
/// value; the unclamped slope and its standard error are also reported.
pub fn box_dimension(bands: &BandSet, eps_schedule: &[f64]) -> Result<DimensionEstimate> {
    if bands.is_empty() {
        return Err(CoreError::EmptySet("box_dimension needs a nonempty set"));
    }
    if eps_schedule.len() < 4 {
        return Err(CoreError::Domain("eps schedule needs at least 4 values"));
    }
    if !eps_schedule.iter().all(|&e| e.is_finite() && e > 0.0) {
        return Err(CoreError::Domain(
            "eps schedule must be positive and finite",
        ));
    }
    for w in eps_schedule.windows(2) {
        if w[1] >= w[0] {
            return Err(CoreError::Domain(
                "eps schedule must be strictly decreasing",
            ));
        }
    }

    let mut counts = Vec::with_capacity(eps_schedule.len());
    let mut xs = Vec::with_capacity(eps_schedule.len());
    let mut ys = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        let n = box_count(bands, eps)?;
        counts.push((eps, n));
        xs.push(math::ln(1.0 / eps));
        ys.push(math::ln(n as f64));
    }

    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(CoreError::Domain("degenerate eps schedule (no spread)"));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let mut ss_res = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        let r = y - (intercept + slope * x);
        ss_res += r * r;
    }
    let dof = (xs.len() - 2).max(1) as f64;
    let stderr = math::sqrt(ss_res / dof / sxx);

    Ok(DimensionEstimate {
        value: slope.clamp(0.0, 1.0),
        raw_slope: slope,
        stderr,
        eps_range: (
            *eps_schedule.last().expect("nonempty schedule"),
            eps_schedule[0],
        ),
        counts,
    })
}

/// Dyadic schedule from `eps_max` halving down to (not below) `eps_min`.
pub fn dyadic_schedule(eps_max: f64, eps_min: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if !(eps_max > 0.0 && eps_min > 0.0) {
        return out;
    }
    let mut eps = eps_max;
    while eps >= eps_min {
        out.push(eps);
        eps *= 0.5;
    }
    out
}

/// Default schedule for a band approximant: floor at four times the
/// narrowest band (never below 1e-12), cap at a quarter of the hull width.
///
/// Below the narrowest band the set is a plain interval union and the slope
/// drifts to 1 regardless of structure, so that scale is not resolved. When
/// the floor leaves fewer than four dyadic steps (a handful of coarse
/// intervals, where near-1 slopes are the honest answer anyway) the schedule
/// falls back to a fixed 12-step descent from the hull scale.
pub fn default_schedule(bands: &BandSet) -> Vec<f64> {
    let Some(hull) = bands.hull() else {
        return Vec::new();
    };
    if hull.width() <= 0.0 {
        return Vec::new();
    }
    let min_width = bands
        .intervals()
        .iter()
        .map(Interval::width)
        .fold(f64::INFINITY, f64::min);
    let eps_min = 4.0 * min_width.max(1e-12);
    let eps_max = hull.width() / 4.0;
    let schedule = dyadic_schedule(eps_max, eps_min);
    if schedule.len() >= 4 {
        schedule
    } else {
        dyadic_schedule(eps_max, eps_max / 2048.0)
    }
}

/// The depth-d prefix of the middle-thirds Cantor construction on [0, 1]:
/// 2^d intervals of width 3^−d. Calibration target with known dimension
/// log 2 / log 3.
pub fn middle_thirds_prefix(depth: u32) -> BandSet {
    let mut intervals = alloc::vec![Interval { lo: 0.0, hi: 1.0 }];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for iv in &intervals {
            let third = iv.width() / 3.0;
            next.push(Interval {
                lo: iv.lo,
                hi: iv.lo + third,
            });
            next.push(Interval {
                lo: iv.hi - third,
                hi: iv.hi,
            });
        }
        intervals = next;
    }
    BandSet::from_intervals(intervals, depth as usize)
}

/// One window of a local dimension profile.
#[derive(Debug, Clone)]
pub struct ProfileWindow {
    pub center: f64,
    pub half_width: f64,
    /// `None` when the window holds no bands or too few ε values survive.
    pub estimate: Option<DimensionEstimate>,
    /// Set when fewer than 3 intervals survive in the window (or none).
    pub low_confidence: bool,
}

/// Windowed box-dimension estimates across the band hull.
#[derive(Debug, Clone)]
pub struct LocalDimensionProfile {
    pub level: usize,
    pub windows: Vec<ProfileWindow>,
}

/// Estimate the local dimension in `window_count` equal slices of the
/// level-k band hull (8 when `None`).
pub fn local_dimension_profile(
    params: &CouplingParams,
    k: usize,
    window_count: Option<usize>,
    opts: &ScanOptions,
) -> Result<LocalDimensionProfile> {
    let bands = band_set(params, k, opts)?;
    let count = window_count.unwrap_or(8).max(1);
    let hull = bands
        .hull()
        .ok_or(CoreError::EmptySet("band set has no hull"))?;
    let width = hull.width() / count as f64;
    let mut windows = Vec::with_capacity(count);
    for i in 0..count {
        let lo = hull.lo + i as f64 * width;
        let hi = if i + 1 == count { hull.hi } else { lo + width };
        let restricted = bands.restrict(Interval { lo, hi });
        let sparse = restricted.intervals().len() < 3;
        let schedule = default_schedule(&restricted);
        let estimate = if restricted.is_empty() || schedule.len() < 4 {
            None
        } else {
            Some(box_dimension(&restricted, &schedule)?)
        };
        let low_confidence = sparse || estimate.is_none();
        windows.push(ProfileWindow {
            center: 0.5 * (lo + hi),
            half_width: 0.5 * (hi - lo),
            estimate,
            low_confidence,
        });
    }
    Ok(LocalDimensionProfile { level: k, windows })
}

/// Global dimension estimates of the covers Σ_k across a list of coupling
/// ratios at fixed J1.
pub fn dimension_vs_parameters(
    j1: f64,
    r_list: &[f64],
    k: usize,
    offset: usize,
    opts: &ScanOptions,
) -> Result<Vec<(f64, DimensionEstimate)>> {
    let mut out = Vec::with_capacity(r_list.len());
    for &r in r_list {
        let params = CouplingParams::new(r * j1, j1)?;
        let cover = nested_cover(&params, k, offset, opts)?;
        let schedule = default_schedule(&cover.bands);
        if schedule.len() < 4 {
            return Err(CoreError::Domain("cover too coarse for a 4-point schedule"));
        }
        out.push((r, box_dimension(&cover.bands, &schedule)?));
    }
    Ok(out)
}
