//! Forward-orbit iteration with certified escape classification.
//!
//! An orbit of the trace map is certified unbounded as soon as a triple
//! (a, b, c) = (x_{k+1}, x_k, x_{k−1}) satisfies the sufficient escape
//! condition |a| > 1, |b| > 1, |ab| > |c|: from such a witness onward the
//! traces grow monotonically and the orbit diverges in every coordinate.
//! Boundedness is never certified — a run that exhausts its budget without
//! finding a witness is reported as undecided.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math;
use crate::tracemap::{gamma_line, trace_map, CouplingParams, SpectralVariable, TracePoint};

/// Iteration budget and numeric guards for orbit classification.
#[derive(Debug, Clone, Copy)]
pub struct OrbitBudget {
    /// Maximum number of trace-map applications.
    pub max_steps: usize,
    /// Threshold C ≥ 1 for the bound-based escape criterion.
    pub escape_threshold: f64,
    /// Magnitude above which iteration stops (doubly exponential growth
    /// reaches this long before f64 overflow).
    pub overflow_guard: f64,
}

impl OrbitBudget {
    pub fn new(max_steps: usize, escape_threshold: f64, overflow_guard: f64) -> Result<Self> {
        if max_steps == 0 {
            return Err(CoreError::Domain("orbit budget needs max_steps >= 1"));
        }
        if escape_threshold.is_nan() || escape_threshold < 1.0 {
            return Err(CoreError::Domain("escape threshold must be >= 1"));
        }
        if overflow_guard.is_nan() || overflow_guard <= 1.0 {
            return Err(CoreError::Domain("overflow guard must exceed 1"));
        }
        Ok(OrbitBudget {
            max_steps,
            escape_threshold,
            overflow_guard,
        })
    }

    pub fn with_max_steps(self, max_steps: usize) -> Self {
        OrbitBudget { max_steps, ..self }
    }
}

impl Default for OrbitBudget {
    fn default() -> Self {
        OrbitBudget {
            max_steps: 10_000,
            escape_threshold: 1.0,
            overflow_guard: 1e150,
        }
    }
}

/// Which escape certificate to look for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscapeCriterion {
    /// |a| > 1, |b| > 1 and |ab| > |c| — checkable per step without history.
    Sufficient,
    /// |c| ≤ C, |a| > C and |b| > C with C = `escape_threshold`. Valid as a
    /// certificate only when the initial third coordinate satisfies
    /// |x₋₁| ≤ C, which is checked against the input.
    Threshold,
}

/// Outcome of a forward-orbit classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitStatus {
    /// A witness triple satisfying the escape condition was found at `step`
    /// (step 0 is the input point itself).
    Escaped { step: usize, witness: TracePoint },
    /// No witness within budget; the orbit may or may not be bounded.
    UndecidedBounded { last: TracePoint },
}

impl OrbitStatus {
    pub fn is_escaped(&self) -> bool {
        matches!(self, OrbitStatus::Escaped { .. })
    }
}

/// Classification result plus the number of steps consumed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitVerdict {
    pub status: OrbitStatus,
    pub steps_used: usize,
}

#[inline]
fn sufficient_witness(p: &TracePoint) -> bool {
    let (a, b, c) = (math::abs(p.x), math::abs(p.y), math::abs(p.z));
    a > 1.0 && b > 1.0 && a * b > c
}

#[inline]
fn threshold_witness(p: &TracePoint, c_bound: f64) -> bool {
    math::abs(p.z) <= c_bound && math::abs(p.x) > c_bound && math::abs(p.y) > c_bound
}

/// Classify a forward semiorbit using the default sufficient criterion.
pub fn classify_orbit(p: TracePoint, budget: &OrbitBudget) -> Result<OrbitVerdict> {
    classify_orbit_with(p, budget, EscapeCriterion::Sufficient)
}

/// Classify a forward semiorbit with an explicit escape criterion.
///
/// The witness check runs on the input point (step 0) and after every map
/// application. Components exceeding the overflow guard abort with a
/// diagnostic unless a witness was already recorded — by construction the
/// scan stops at the witness, so the guard can only trip witness-free.
pub fn classify_orbit_with(
    p: TracePoint,
    budget: &OrbitBudget,
    criterion: EscapeCriterion,
) -> Result<OrbitVerdict> {
    if !p.is_finite() {
        return Err(CoreError::NonFiniteInput);
    }
    if criterion == EscapeCriterion::Threshold && math::abs(p.z) > budget.escape_threshold {
        return Err(CoreError::Precondition(
            "threshold criterion needs |x_{-1}| <= C on the input triple",
        ));
    }
    let witness_found = |q: &TracePoint| match criterion {
        EscapeCriterion::Sufficient => sufficient_witness(q),
        EscapeCriterion::Threshold => threshold_witness(q, budget.escape_threshold),
    };

    let mut cur = p;
    for step in 0..=budget.max_steps {
        if witness_found(&cur) {
            return Ok(OrbitVerdict {
                status: OrbitStatus::Escaped { step, witness: cur },
                steps_used: step,
            });
        }
        if step == budget.max_steps {
            break;
        }
        let next = trace_map(cur);
        if !next.is_finite() || next.max_abs() > budget.overflow_guard {
            return Err(CoreError::UncertifiedOverflow { step: step + 1 });
        }
        cur = next;
    }
    Ok(OrbitVerdict {
        status: OrbitStatus::UndecidedBounded { last: cur },
        steps_used: budget.max_steps,
    })
}

/// Outcome of the coordinate-wise divergence follow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceCheck {
    /// All three coordinates exceeded the divergence bound after `steps`
    /// further applications past the escape witness.
    Diverged { steps: usize },
    /// Budget exhausted before all coordinates crossed the bound.
    Inconclusive,
}

/// Magnitude every coordinate must exceed for the divergence check.
pub const DIVERGENCE_BOUND: f64 = 1e6;

/// Verify that a certified-escaped orbit diverges in every coordinate.
///
/// Preconditions: `classify_orbit(p)` must report `Escaped`; violating this
/// is an error, not a `false`. Iteration continues from the witness until
/// min(|x|, |y|, |z|) > 10⁶ or the budget runs out (`Inconclusive`).
pub fn coordinate_divergence_check(p: TracePoint, budget: &OrbitBudget) -> Result<DivergenceCheck> {
    let verdict = classify_orbit(p, budget)?;
    let OrbitStatus::Escaped { witness, .. } = verdict.status else {
        return Err(CoreError::Precondition(
            "divergence check requires an Escaped classification",
        ));
    };
    let mut cur = witness;
    for step in 0..=budget.max_steps {
        let min_abs = math::abs(cur.x).min(math::abs(cur.y)).min(math::abs(cur.z));
        if min_abs > DIVERGENCE_BOUND {
            return Ok(DivergenceCheck::Diverged { steps: step });
        }
        if !cur.is_finite() {
            // Past the witness the orbit is certified unbounded; hitting
            // infinity in every slot counts as divergence, otherwise the
            // remaining finite coordinates have not crossed the bound yet.
            return Ok(DivergenceCheck::Inconclusive);
        }
        cur = trace_map(cur);
    }
    Ok(DivergenceCheck::Inconclusive)
}

/// One row of an escape-time field over a spectral grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeFieldRow {
    pub s: f64,
    pub verdict: OrbitVerdict,
}

/// Uniform grid specification on the s axis (inclusive endpoints).
#[derive(Debug, Clone, Copy)]
pub struct SGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) || start < 0.0 || stop < start {
            return Err(CoreError::Domain("escape grid needs 0 <= start <= stop"));
        }
        Ok(SGrid { start, stop, count })
    }

    /// Grid points; refining `count` to `2·count − 1` keeps every existing
    /// point bit-identical, so refined fields only add rows.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count)
            .map(move |i| crate::tracemap::grid_point(self.start, self.stop, i, self.count))
    }
}

/// Classify γ_r(s) for every s on the grid.
pub fn escape_time_field(
    params: &CouplingParams,
    grid: &SGrid,
    budget: &OrbitBudget,
) -> Result<Vec<EscapeFieldRow>> {
    let mut rows = Vec::with_capacity(grid.count);
    for s in grid.points() {
        let sv = SpectralVariable::new(s)?;
        let verdict = classify_orbit(gamma_line(params, sv), budget)?;
        rows.push(EscapeFieldRow { s, verdict });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracemap::{per2_curve, P1};

    fn sv(s: f64) -> SpectralVariable {
        SpectralVariable::new(s).unwrap()
    }

    #[test]
    fn immediate_witness_escapes_at_step_zero() {
        let v = classify_orbit(TracePoint::new(2.0, 2.0, 0.0), &OrbitBudget::default()).unwrap();
        match v.status {
            OrbitStatus::Escaped { step, witness } => {
                assert_eq!(step, 0);
                assert_eq!(witness, TracePoint::new(2.0, 2.0, 0.0));
            }
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn fixed_point_stays_undecided() {
        let budget = OrbitBudget::default().with_max_steps(500);
        let v = classify_orbit(P1, &budget).unwrap();
        assert!(matches!(v.status, OrbitStatus::UndecidedBounded { .. }));
        assert_eq!(v.steps_used, 500);
    }

    #[test]
    fn period_two_point_stays_undecided() {
        // ϑ(2) is period-two in exact arithmetic. The curve is normally
        // hyperbolic, so the 1-ulp rounding of 2/3 drifts along the unstable
        // direction and eventually produces a spurious witness; within a few
        // dozen steps the computed orbit still shadows the periodic one.
        let p = per2_curve(2.0).unwrap();
        assert_eq!(p, TracePoint::new(2.0, 2.0 / 3.0, 2.0));
        let budget = OrbitBudget::default().with_max_steps(25);
        let v = classify_orbit(p, &budget).unwrap();
        assert!(matches!(v.status, OrbitStatus::UndecidedBounded { .. }));
    }

    #[test]
    fn non_finite_input_rejected() {
        let err = classify_orbit(TracePoint::new(f64::NAN, 0.0, 0.0), &OrbitBudget::default());
        assert_eq!(err.unwrap_err(), CoreError::NonFiniteInput);
    }

    #[test]
    fn escape_is_permanent_under_larger_budgets() {
        let budget = OrbitBudget::default();
        let doubled = budget.with_max_steps(budget.max_steps * 2);
        for i in 0..200 {
            let t = i as f64 * 0.073;
            let p = TracePoint::new(1.0 + t, 1.5 + 0.3 * t, t);
            let v1 = classify_orbit(p, &budget).unwrap();
            if let OrbitStatus::Escaped { step, .. } = v1.status {
                let v2 = classify_orbit(p, &doubled).unwrap();
                match v2.status {
                    OrbitStatus::Escaped { step: step2, .. } => assert_eq!(step, step2),
                    _ => panic!("escape verdict flipped at doubled budget"),
                }
            }
        }
    }

    #[test]
    fn divergence_check_reference_points() {
        let budget = OrbitBudget::default();
        match coordinate_divergence_check(TracePoint::new(2.0, 2.0, 0.0), &budget).unwrap() {
            DivergenceCheck::Diverged { steps } => assert!(steps <= 10),
            DivergenceCheck::Inconclusive => panic!("(2,2,0) must diverge quickly"),
        }
        match coordinate_divergence_check(TracePoint::new(10.0, 10.0, 0.0), &budget).unwrap() {
            DivergenceCheck::Diverged { steps } => assert!(steps <= 5),
            DivergenceCheck::Inconclusive => panic!("(10,10,0) must diverge quickly"),
        }
    }

    #[test]
    fn divergence_check_requires_escaped_input() {
        let err = coordinate_divergence_check(P1, &OrbitBudget::default());
        assert!(matches!(err, Err(CoreError::Precondition(_))));
    }

    #[test]
    fn threshold_criterion_validates_seed() {
        let budget = OrbitBudget::new(100, 1.0, 1e150).unwrap();
        // |z| = 2 > C = 1 on the input: precondition violation.
        let err = classify_orbit_with(
            TracePoint::new(0.0, 0.0, 2.0),
            &budget,
            EscapeCriterion::Threshold,
        );
        assert!(matches!(err, Err(CoreError::Precondition(_))));
        // Same triple is fine under the sufficient criterion.
        assert!(classify_orbit(TracePoint::new(0.0, 0.0, 2.0), &budget).is_ok());
    }

    #[test]
    fn uniform_chain_field_reference_rows() {
        let params = CouplingParams::uniform(1.0).unwrap();
        let budget = OrbitBudget::default();

        // s = 5 is outside the uniform band [0, 4].
        let v5 = classify_orbit(gamma_line(&params, sv(5.0)), &budget).unwrap();
        assert!(v5.status.is_escaped());

        // s = 2 is interior to the band.
        let v2 = classify_orbit(gamma_line(&params, sv(2.0)), &budget).unwrap();
        assert!(matches!(v2.status, OrbitStatus::UndecidedBounded { .. }));
    }

    #[test]
    fn empty_grid_gives_empty_table() {
        let params = CouplingParams::uniform(1.0).unwrap();
        let grid = SGrid::new(0.0, 5.0, 0).unwrap();
        let rows = escape_time_field(&params, &grid, &OrbitBudget::default()).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn grid_refinement_preserves_points() {
        let grid = SGrid::new(0.25, 4.75, 10).unwrap();
        let refined = SGrid::new(0.25, 4.75, 19).unwrap();
        let coarse: alloc::vec::Vec<f64> = grid.points().collect();
        let fine: alloc::vec::Vec<f64> = refined.points().collect();
        for (i, c) in coarse.iter().enumerate() {
            assert_eq!(*c, fine[2 * i], "refinement moved grid point {i}");
        }
    }
}
