//! The load-bearing cross-check: the trace recursion along the seed line
//! must reproduce the half-traces of explicitly multiplied transfer-matrix
//! products, and the band machinery must agree with the orbit classifier.

mod common;

use common::SplitMix64;
use fibising_core::dynamics::{classify_orbit, OrbitBudget, OrbitStatus};
use fibising_core::fermion::direct_transfer_product;
use fibising_core::rel_residual;
use fibising_core::spectrum::{
    band_set, nested_cover, resolve_offset, trace_value, trace_value_with_guard, ScanOptions,
    TraceEval,
};
use fibising_core::tracemap::{gamma_line, CouplingParams, SpectralVariable};

fn sv(s: f64) -> SpectralVariable {
    SpectralVariable::new(s).unwrap()
}

#[test]
fn trace_recursion_matches_direct_products() {
    let mut rng = SplitMix64::new(0x5eed_0001);
    for sample in 0..100 {
        let j1 = rng.uniform(0.5, 2.0);
        let r = rng.uniform(0.5, 2.0);
        let params = CouplingParams::new(r * j1, j1).unwrap();
        let s_max = ScanOptions::default().resolved_s_max(&params);
        let s = sv(rng.uniform(0.0, s_max));
        for k in 1..=12 {
            let product = direct_transfer_product(&params, k, s).unwrap();
            // Outside the bands the traces grow doubly exponentially (past
            // 1e150 by k = 12); the wide guard keeps every sampled pair
            // representable so that no comparison is skipped.
            let x_k = match trace_value_with_guard(&params, s, k as i64, 1e290).unwrap() {
                TraceEval::Value(v) => v,
                TraceEval::Overflowed => {
                    panic!("overflow at k={k} inside the oracle window (sample {sample})")
                }
            };
            let resid = rel_residual(product.half_trace(), x_k);
            assert!(
                resid < 1e-9,
                "sample {sample} k={k} s={}: half-trace {} vs recursion {x_k} (resid {resid})",
                s.value(),
                product.half_trace(),
            );
        }
    }
}

#[test]
fn seed_traces_match_closed_forms() {
    let mut rng = SplitMix64::new(0x5eed_0002);
    for _ in 0..50 {
        let j1 = rng.uniform(0.3, 3.0);
        let j0 = rng.uniform(0.3, 3.0);
        let params = CouplingParams::new(j0, j1).unwrap();
        let s = rng.uniform(0.0, 10.0);
        let r = params.ratio();

        let get = |k: i64| match trace_value(&params, sv(s), k).unwrap() {
            TraceEval::Value(v) => v,
            TraceEval::Overflowed => panic!("seed trace overflowed"),
        };
        assert!(rel_residual(get(-1), (r + 1.0 / r) / 2.0) < 1e-12);
        assert!(rel_residual(get(0), (s - (1.0 + j0 * j0)) / (2.0 * j0)) < 1e-12);
        assert!(rel_residual(get(1), (s - (1.0 + j1 * j1)) / (2.0 * j1)) < 1e-12);
    }
}

#[test]
fn bands_and_orbits_agree() {
    // Interior points of Σ_{k_max} satisfy |x_j| ≤ 1 at one of the three
    // top levels, and an escape witness at step w forces |x_j| > 1 for all
    // j ≥ w; hence no witness can fire within N + k_max − 1 steps. Points
    // outside the first cover (all three low-level traces beyond 1) must
    // escape under a generous budget.
    let params = CouplingParams::new(0.8, 1.0).unwrap();
    let opts = ScanOptions::default();
    let k_max = 8usize;
    let offset = resolve_offset(&params, k_max, 5, &opts).unwrap();
    let cover = nested_cover(&params, k_max, offset, &opts).unwrap();
    let sigma1 = nested_cover(&params, 1, offset, &opts).unwrap();
    let interior_budget = OrbitBudget::default().with_max_steps(offset + k_max - 1);
    let exterior_budget = OrbitBudget::default();

    let margin = 1e-6;
    let s_max = opts.resolved_s_max(&params);
    let mut interior_checked = 0usize;
    let mut exterior_checked = 0usize;
    for i in 0..4000 {
        let s = s_max * i as f64 / 3999.0;
        let deep_inside = cover
            .bands
            .intervals()
            .iter()
            .any(|iv| s >= iv.lo + margin && s <= iv.hi - margin);
        let far_outside = !sigma1.bands.contains(s, margin);
        if deep_inside {
            let verdict = classify_orbit(gamma_line(&params, sv(s)), &interior_budget).unwrap();
            interior_checked += 1;
            assert!(
                matches!(verdict.status, OrbitStatus::UndecidedBounded { .. }),
                "interior point s={s} witnessed an escape below the cover level"
            );
        } else if far_outside {
            let verdict = classify_orbit(gamma_line(&params, sv(s)), &exterior_budget).unwrap();
            exterior_checked += 1;
            assert!(
                verdict.status.is_escaped(),
                "exterior point s={s} not certified escaped"
            );
        }
    }
    assert!(
        interior_checked > 100,
        "interior sample too thin: {interior_checked}"
    );
    assert!(
        exterior_checked > 100,
        "exterior sample too thin: {exterior_checked}"
    );
}

#[test]
fn escape_set_is_open_under_grid_refinement() {
    // Restatement of the closedness of the bounded set: every escaped grid
    // point keeps escaped neighbours at 2x refinement (generous budget for
    // the neighbours, which may sit closer to a band edge).
    let params = CouplingParams::new(0.8, 1.0).unwrap();
    let budget = OrbitBudget::default();
    let neighbour_budget = OrbitBudget::default().with_max_steps(4 * budget.max_steps);
    let s_max = 5.0;
    let n = 2000usize;
    let h = s_max / n as f64;
    for i in 0..=n {
        let s = i as f64 * h;
        let v = classify_orbit(gamma_line(&params, sv(s)), &budget).unwrap();
        if !v.status.is_escaped() {
            continue;
        }
        for neighbour in [s - 0.5 * h, s + 0.5 * h] {
            if !(0.0..=s_max).contains(&neighbour) {
                continue;
            }
            let nv = classify_orbit(gamma_line(&params, sv(neighbour)), &neighbour_budget).unwrap();
            assert!(
                nv.status.is_escaped(),
                "escaped s={s} has undecided refined neighbour {neighbour}"
            );
        }
    }
}

#[test]
fn level_band_counts_follow_fibonacci_structure() {
    // At r != 1 the level-k band set fragments into exactly F_{k-2} bands
    // (1, 1, 2, 3, 5, ... starting at k = 1); a missed or spurious band
    // would break the count.
    let params = CouplingParams::new(0.8, 1.0).unwrap();
    let opts = ScanOptions::default();
    let expected = [1usize, 1, 2, 3, 5, 8, 13, 21, 34, 55];
    for (i, want) in expected.iter().enumerate() {
        let k = i + 1;
        let got = band_set(&params, k, &opts).unwrap().intervals().len();
        assert_eq!(got, *want, "band count at level {k}");
    }
}
