//! The identity suite behind `fibising check`: every exactly-known algebraic
//! relation of the trace map and the transfer matrices, evaluated
//! numerically with pinned residual thresholds.

use fibising_core::rel_residual;
use fibising_core::tracemap::{
    apply_symmetry, fricke_vogt, gamma_invariant, gamma_line, jacobian, jacobian_eigenvalues,
    per2_curve, seed_matrices, single_site_matrix, torus_automorphism, torus_factor, trace_map,
    trace_map_inverse, trace_map_inverse_n, trace_map_n, CouplingParams, SpectralVariable,
    Symmetry, TracePoint, P1, P2, P3, P4,
};

use crate::rng::SplitMix64;

/// One row of the residual table.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.threshold
    }
}

/// True iff every row is below threshold.
pub fn all_passed(rows: &[CheckRow]) -> bool {
    rows.iter().all(CheckRow::passed)
}

fn point_residual(a: TracePoint, b: TracePoint) -> f64 {
    rel_residual(a.x, b.x)
        .max(rel_residual(a.y, b.y))
        .max(rel_residual(a.z, b.z))
}

fn random_point(rng: &mut SplitMix64, half_width: f64) -> TracePoint {
    TracePoint::new(
        rng.uniform(-half_width, half_width),
        rng.uniform(-half_width, half_width),
        rng.uniform(-half_width, half_width),
    )
}

fn random_params(rng: &mut SplitMix64) -> CouplingParams {
    CouplingParams::new(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)).expect("positive couplings")
}

fn sv(s: f64) -> SpectralVariable {
    SpectralVariable::new(s).expect("nonnegative s")
}

/// Run the full identity suite with deterministic sampling.
pub fn identity_suite(seed: u64) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let mut rng = SplitMix64::new(seed);

    // Seed identity M1 = M0 * M-1 over random (params, s).
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let params = random_params(&mut rng);
        let s = sv(rng.uniform(0.0, 10.0));
        let (m_m1, m0, m1) = seed_matrices(&params, s);
        worst = worst.max(m1.residual(&m0.mul(&m_m1)));
    }
    rows.push(CheckRow {
        name: "seed identity M1 = M0*M-1",
        residual: worst,
        threshold: 1e-12,
    });

    // Singularity cycle P2 -> P3 -> P4 -> P2 (exact in floating point).
    let cycle = point_residual(trace_map(P2), P3)
        .max(point_residual(trace_map(P3), P4))
        .max(point_residual(trace_map(P4), P2))
        .max(point_residual(trace_map(P1), P1));
    rows.push(CheckRow {
        name: "singularity cycle P2->P3->P4->P2",
        residual: cycle,
        threshold: 0.0,
    });

    // Period-two curve: f^2 on theta(x).
    let mut worst = 0.0f64;
    for i in 0..400 {
        let x = -10.0 + 20.0 * i as f64 / 399.0;
        if (x - 0.5).abs() < 0.01 {
            continue;
        }
        let theta = per2_curve(x).expect("away from 1/2");
        worst = worst.max(point_residual(trace_map_n(theta, 2), theta));
    }
    rows.push(CheckRow {
        name: "per2 curve f^2 = id",
        residual: worst,
        threshold: 1e-9,
    });

    // Jacobian eigenvalues at P1: {(3-sqrt5)/2, -1, (3+sqrt5)/2}.
    let eig = jacobian_eigenvalues(P1).expect("three real eigenvalues at P1");
    let root5 = 5.0f64.sqrt();
    let expect = [-1.0, (3.0 - root5) / 2.0, (3.0 + root5) / 2.0];
    let mut sorted = expect;
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut worst = 0.0f64;
    for (got, want) in eig.iter().zip(sorted.iter()) {
        worst = worst.max((got - want).abs());
    }
    let jac_det = (jacobian(P1).det() + 1.0).abs();
    rows.push(CheckRow {
        name: "Df(P1) eigenvalues",
        residual: worst,
        threshold: 1e-9,
    });
    rows.push(CheckRow {
        name: "det Df = -1",
        residual: jac_det,
        threshold: 1e-12,
    });

    // Torus semiconjugacy on a 100x100 grid, plus the image lying on S0.
    let mut conj = 0.0f64;
    let mut on_surface = 0.0f64;
    for i in 0..100 {
        for j in 0..100 {
            let (t, p) = (i as f64 / 100.0, j as f64 / 100.0);
            let lhs = trace_map(torus_factor(t, p));
            let (ta, pa) = torus_automorphism(t, p);
            let rhs = torus_factor(ta, pa);
            conj = conj
                .max((lhs.x - rhs.x).abs())
                .max((lhs.y - rhs.y).abs())
                .max((lhs.z - rhs.z).abs());
            on_surface = on_surface.max(fricke_vogt(torus_factor(t, p)).abs());
        }
    }
    rows.push(CheckRow {
        name: "torus semiconjugacy f∘F = F∘A",
        residual: conj,
        threshold: 1e-10,
    });
    rows.push(CheckRow {
        name: "torus image on S0",
        residual: on_surface,
        threshold: 1e-10,
    });

    // Reversing symmetry: s∘f^6∘s vs f^-6 at random tame points.
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = random_point(&mut rng, 2.0);
        let lhs = apply_symmetry(Symmetry::S, trace_map_n(apply_symmetry(Symmetry::S, p), 6));
        let rhs = trace_map_inverse_n(p, 6);
        worst = worst.max(point_residual(lhs, rhs));
    }
    rows.push(CheckRow {
        name: "s∘f^6∘s vs f^-6",
        residual: worst,
        threshold: 1e-8,
    });

    // Sign symmetries commute with f^6.
    for (sym, name) in [
        (Symmetry::S2, "s2∘f^6∘s2 vs f^6"),
        (Symmetry::S3, "s3∘f^6∘s3 vs f^6"),
        (Symmetry::S4, "s4∘f^6∘s4 vs f^6"),
    ] {
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let p = random_point(&mut rng, 2.0);
            let lhs = apply_symmetry(sym, trace_map_n(apply_symmetry(sym, p), 6));
            worst = worst.max(point_residual(lhs, trace_map_n(p, 6)));
        }
        rows.push(CheckRow {
            name,
            residual: worst,
            threshold: 1e-8,
        });
    }

    // Invariant preservation along orbits. Escaped tails are skipped once
    // coordinates pass 100: beyond that the cubic term xyz amplifies
    // roundoff past the 1e-9 target and the comparison stops measuring the
    // map.
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = random_point(&mut rng, 2.0);
        let i0 = fricke_vogt(p);
        let scale = 1.0f64.max(i0.abs());
        let mut cur = p;
        for _ in 0..50 {
            cur = trace_map(cur);
            if cur.max_abs() > 100.0 {
                break;
            }
            worst = worst.max((fricke_vogt(cur) - i0).abs() / scale);
        }
    }
    rows.push(CheckRow {
        name: "invariant preservation (n<=50)",
        residual: worst,
        threshold: 1e-9,
    });

    // Closed form of the invariant along the seed line.
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let params = random_params(&mut rng);
        let s = sv(rng.uniform(0.0, 10.0));
        worst = worst.max(rel_residual(
            fricke_vogt(gamma_line(&params, s)),
            gamma_invariant(&params, s),
        ));
    }
    rows.push(CheckRow {
        name: "I(gamma(s)) closed form",
        residual: worst,
        threshold: 1e-10,
    });

    // Inverse round trip on moderate points.
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let p = random_point(&mut rng, 30.0);
        worst = worst.max(point_residual(trace_map_inverse(trace_map(p)), p));
    }
    rows.push(CheckRow {
        name: "f^-1∘f = id",
        residual: worst,
        threshold: 1e-12,
    });

    // Unimodularity of single-site matrices away from extreme couplings.
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let j = rng.uniform(0.5, 2.0);
        let s = sv(rng.uniform(0.0, 10.0));
        worst = worst.max(rel_residual(single_site_matrix(j, s).det(), 1.0));
    }
    rows.push(CheckRow {
        name: "det M(J, s) = 1",
        residual: worst,
        threshold: 1e-12,
    });

    rows
}
