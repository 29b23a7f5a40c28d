//! The algebra of the model: couplings, transfer matrices, the Fibonacci
//! trace map and its invariant.
//!
//! The trace map is the polynomial diffeomorphism of ℝ³
//!
//! ```text
//! f(x, y, z) = (2xy − z, x, y),      f⁻¹(x, y, z) = (y, z, 2yz − x),
//! ```
//!
//! which advances the triple of consecutive transfer-matrix half-traces
//! (x_{k+1}, x_k, x_{k−1}). It preserves the Fricke–Vogt invariant
//! I(x, y, z) = x² + y² + z² − 2xyz − 1, whose level sets S_V are invariant
//! cubic surfaces. The seed triple for coupling ratio r = J0/J1 moves along
//! the line γ_r(s) as the spectral variable s sweeps [0, ∞); all spectral
//! objects downstream (bands, covers, escape fields) are built from forward
//! orbits of γ_r.
//!
//! Everything in this module is pure value arithmetic and safe to call from
//! any thread.

use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math;

/// The pair of couplings (J0 on letter A, J1 on letter B), both positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    j0: f64,
    j1: f64,
}

impl CouplingParams {
    pub fn new(j0: f64, j1: f64) -> Result<Self> {
        if !(j0.is_finite() && j1.is_finite() && j0 > 0.0 && j1 > 0.0) {
            return Err(CoreError::InvalidCoupling { j0, j1 });
        }
        Ok(CouplingParams { j0, j1 })
    }

    /// Uniform chain J0 = J1 = j (the periodic, non-Cantor case).
    pub fn uniform(j: f64) -> Result<Self> {
        CouplingParams::new(j, j)
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }

    pub fn j1(&self) -> f64 {
        self.j1
    }

    /// Coupling ratio r = J0/J1.
    pub fn ratio(&self) -> f64 {
        self.j0 / self.j1
    }
}

/// Rescaled squared-energy spectral variable s ≥ 0.
///
/// Physical excitation energies sit at E = ±2√s; the entire library works on
/// the s axis and converts to the energy axis only on demand.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SpectralVariable(f64);

impl SpectralVariable {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s < 0.0 {
            return Err(CoreError::InvalidSpectral(s));
        }
        Ok(SpectralVariable(s))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The two physical energies (−2√s, +2√s) this s corresponds to.
    pub fn energies(self) -> (f64, f64) {
        let e = 2.0 * math::sqrt(self.0);
        (-e, e)
    }
}

/// Level V ≥ 0 of the Fricke–Vogt invariant, selecting the surface S_V.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SurfaceLevel(f64);

impl SurfaceLevel {
    pub fn new(v: f64) -> Result<Self> {
        if !v.is_finite() || v < 0.0 {
            return Err(CoreError::InvalidSurfaceLevel(v));
        }
        Ok(SurfaceLevel(v))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A point of ℝ³ carrying trace-triple semantics (x_{k+1}, x_k, x_{k−1}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl TracePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        TracePoint { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest component magnitude.
    pub fn max_abs(&self) -> f64 {
        math::abs(self.x)
            .max(math::abs(self.y))
            .max(math::abs(self.z))
    }
}

/// The fixed singularity P₁ = (1,1,1) of S₀.
pub const P1: TracePoint = TracePoint {
    x: 1.0,
    y: 1.0,
    z: 1.0,
};
/// P₂ = (−1,−1,1); under f the cycle runs P₂ ↦ P₃ ↦ P₄ ↦ P₂.
pub const P2: TracePoint = TracePoint {
    x: -1.0,
    y: -1.0,
    z: 1.0,
};
pub const P3: TracePoint = TracePoint {
    x: 1.0,
    y: -1.0,
    z: -1.0,
};
pub const P4: TracePoint = TracePoint {
    x: -1.0,
    y: 1.0,
    z: -1.0,
};

/// One forward step of the trace map f(x, y, z) = (2xy − z, x, y).
#[inline]
pub fn trace_map(p: TracePoint) -> TracePoint {
    TracePoint {
        x: 2.0 * p.x * p.y - p.z,
        y: p.x,
        z: p.y,
    }
}

/// One backward step, f⁻¹(x, y, z) = (y, z, 2yz − x).
#[inline]
pub fn trace_map_inverse(p: TracePoint) -> TracePoint {
    TracePoint {
        x: p.y,
        y: p.z,
        z: 2.0 * p.y * p.z - p.x,
    }
}

/// n-fold forward composition fⁿ.
pub fn trace_map_n(mut p: TracePoint, n: usize) -> TracePoint {
    for _ in 0..n {
        p = trace_map(p);
    }
    p
}

/// n-fold backward composition f⁻ⁿ.
pub fn trace_map_inverse_n(mut p: TracePoint, n: usize) -> TracePoint {
    for _ in 0..n {
        p = trace_map_inverse(p);
    }
    p
}

/// The Fricke–Vogt invariant I(x, y, z) = x² + y² + z² − 2xyz − 1,
/// preserved by the trace map.
#[inline]
pub fn fricke_vogt(p: TracePoint) -> f64 {
    p.x * p.x + p.y * p.y + p.z * p.z - 2.0 * p.x * p.y * p.z - 1.0
}

/// The line of initial conditions γ_r(s): the seed triple (x₁, x₀, x₋₁)
/// whose forward orbit encodes the spectrum.
///
/// The third coordinate x₋₁ = (r + 1/r)/2 is independent of s and equals 1
/// exactly in the uniform case r = 1.
pub fn gamma_line(params: &CouplingParams, s: SpectralVariable) -> TracePoint {
    let (j0, j1) = (params.j0(), params.j1());
    let s = s.value();
    TracePoint {
        x: (s - (1.0 + j1 * j1)) / (2.0 * j1),
        y: (s - (1.0 + j0 * j0)) / (2.0 * j0),
        z: (j0 * j0 + j1 * j1) / (2.0 * j0 * j1),
    }
}

/// Closed form of the invariant along the seed line:
/// I(γ_r(s)) = (s/4)(1/r − r)².
///
/// Zero for all s exactly when r = 1 (the seed line then lies on S₀ and
/// passes through the singularities); strictly increasing in s otherwise.
pub fn gamma_invariant(params: &CouplingParams, s: SpectralVariable) -> f64 {
    let r = params.ratio();
    let d = 1.0 / r - r;
    s.value() / 4.0 * d * d
}

/// The curve ϑ(x) = (x, x/(2x−1), x) of period-two points of f.
///
/// ϑ(1) = P₁; the invariant I(ϑ(x)) is nonnegative and vanishes only there.
pub fn per2_curve(x: f64) -> Result<TracePoint> {
    if !x.is_finite() {
        return Err(CoreError::NonFiniteInput);
    }
    if x == 0.5 {
        return Err(CoreError::Domain("per2_curve is undefined at x = 1/2"));
    }
    Ok(TracePoint {
        x,
        y: x / (2.0 * x - 1.0),
        z: x,
    })
}

/// 3×3 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}

/// Jacobian Df of the trace map at p: rows ((2y, 2x, −1), (1,0,0), (0,1,0)).
///
/// Its determinant is −1 everywhere (f is volume-preserving up to
/// orientation).
pub fn jacobian(p: TracePoint) -> Mat3 {
    Mat3([
        [2.0 * p.y, 2.0 * p.x, -1.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ])
}

/// Eigenvalues of the Jacobian at p, sorted ascending, when all three are
/// real; `None` when a complex pair occurs.
///
/// The Jacobian is a companion-form matrix with characteristic polynomial
/// λ³ − 2y·λ² − 2x·λ + 1, solved by the trigonometric method.
pub fn jacobian_eigenvalues(p: TracePoint) -> Option<[f64; 3]> {
    solve_cubic_real(-2.0 * p.y, -2.0 * p.x, 1.0)
}

/// Real roots of λ³ + aλ² + bλ + c when all three are real (multiplicities
/// allowed), sorted ascending.
fn solve_cubic_real(a: f64, b: f64, c: f64) -> Option<[f64; 3]> {
    // Depress: λ = t − a/3.
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let discriminant = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    if discriminant > 1e-12 * (1.0 + q * q + p * p) {
        return None; // one real root, one complex pair
    }
    let shift = -a / 3.0;
    if p >= 0.0 {
        // p ≈ 0 with disc ≤ 0 forces q ≈ 0: triple root.
        return Some([shift, shift, shift]);
    }
    let m = 2.0 * math::sqrt(-p / 3.0);
    let cos_arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let theta = acos(cos_arg);
    let mut roots = [0.0f64; 3];
    for (k, r) in roots.iter_mut().enumerate() {
        *r = m * math::cos((theta - 2.0 * core::f64::consts::PI * k as f64) / 3.0) + shift;
    }
    roots.sort_unstable_by(|u, v| u.partial_cmp(v).expect("roots are finite"));
    Some(roots)
}

#[cfg(feature = "std")]
fn acos(x: f64) -> f64 {
    x.acos()
}

#[cfg(not(feature = "std"))]
fn acos(x: f64) -> f64 {
    libm::acos(x)
}

/// The symmetry group elements used by the identity checks.
///
/// `S` is the reversing symmetry (x,y,z) ↦ (z,y,x), conjugating f⁶ to f⁻⁶;
/// `S2`–`S4` are the sign-flip involutions commuting with f⁶, which carry
/// P₁ to P₂, P₃, P₄ respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    S,
    S2,
    S3,
    S4,
}

/// Apply one of the symmetries to a point.
pub fn apply_symmetry(sym: Symmetry, p: TracePoint) -> TracePoint {
    match sym {
        Symmetry::S => TracePoint::new(p.z, p.y, p.x),
        Symmetry::S2 => TracePoint::new(-p.x, -p.y, p.z),
        Symmetry::S3 => TracePoint::new(p.x, -p.y, -p.z),
        Symmetry::S4 => TracePoint::new(-p.x, p.y, -p.z),
    }
}

/// Factor map F(θ, φ) = (cos 2π(θ+φ), cos 2πθ, cos 2πφ) from the 2-torus
/// onto the bounded central part of S₀.
///
/// Semiconjugacy: f ∘ F = F ∘ 𝒜 with 𝒜 the torus automorphism
/// (θ, φ) ↦ (θ+φ, θ) mod 1.
pub fn torus_factor(theta: f64, phi: f64) -> TracePoint {
    let tau = core::f64::consts::TAU;
    TracePoint {
        x: math::cos(tau * (theta + phi)),
        y: math::cos(tau * theta),
        z: math::cos(tau * phi),
    }
}

/// The hyperbolic torus automorphism 𝒜(θ, φ) = (θ+φ, θ) mod 1.
pub fn torus_automorphism(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta + phi;
    t -= math::floor(t);
    (t, theta - math::floor(theta))
}

// ───────────────────────────────────────────────────────────────────
//  Transfer matrices
// ───────────────────────────────────────────────────────────────────

/// 2×2 real transfer matrix, row-major. Unimodular by construction for all
/// single-site matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m: [[f64; 2]; 2],
}

impl TransferMatrix {
    pub fn identity() -> Self {
        TransferMatrix {
            m: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn half_trace(&self) -> f64 {
        0.5 * (self.m[0][0] + self.m[1][1])
    }

    /// Matrix product self · rhs.
    pub fn mul(&self, rhs: &TransferMatrix) -> TransferMatrix {
        let a = &self.m;
        let b = &rhs.m;
        TransferMatrix {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    /// Largest entry-wise scaled deviation from `other`.
    pub fn residual(&self, other: &TransferMatrix) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max(math::rel_residual(self.m[i][j], other.m[i][j]));
            }
        }
        worst
    }
}

impl core::ops::Mul for TransferMatrix {
    type Output = TransferMatrix;
    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        TransferMatrix::mul(&self, &rhs)
    }
}

/// Single-site transfer matrix M(λ) at coupling J, evaluated at λ = 2√s so
/// that its half-trace is the rescaled (s − (1 + J²))/(2J).
///
/// Entries: ((−1/J, λ/2J), (−λ/2J, (λ² − 4J²)/4J)); determinant 1 exactly
/// in exact arithmetic.
pub fn single_site_matrix(j: f64, s: SpectralVariable) -> TransferMatrix {
    let root = math::sqrt(s.value());
    TransferMatrix {
        m: [[-1.0 / j, root / j], [-root / j, (s.value() - j * j) / j]],
    }
}

/// The three seed matrices (M₋₁, M₀, M₁) of the transfer recursion at the
/// given couplings, with M₁ = M₀ · M₋₁.
///
/// M₀ and M₁ are the single-site matrices at J0 and J1; M₋₁ is the
/// upper-triangular matrix whose half-trace (J0/J1 + J1/J0)/2 seeds the
/// trace recursion at index −1.
pub fn seed_matrices(
    params: &CouplingParams,
    s: SpectralVariable,
) -> (TransferMatrix, TransferMatrix, TransferMatrix) {
    let (j0, j1) = (params.j0(), params.j1());
    let root = math::sqrt(s.value());
    let m_minus1 = TransferMatrix {
        m: [
            [j0 / j1, root * (j1 * j1 - j0 * j0) / (j0 * j1)],
            [0.0, j1 / j0],
        ],
    };
    let m0 = single_site_matrix(j0, s);
    let m1 = single_site_matrix(j1, s);
    (m_minus1, m0, m1)
}

// ───────────────────────────────────────────────────────────────────
//  Invariant surface sampling
// ───────────────────────────────────────────────────────────────────

/// Rectangular (x, y) window for surface sampling.
#[derive(Debug, Clone, Copy)]
pub struct MeshWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// Grid resolution for surface sampling.
#[derive(Debug, Clone, Copy)]
pub struct MeshResolution {
    pub nx: usize,
    pub ny: usize,
}

/// One sampled point of an invariant surface S_V.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Sample the surface S_V over an (x, y) grid by solving the defining
/// quadratic in z: z = xy ± √(x²y² − x² − y² + 1 + V).
///
/// Grid cells where the discriminant is negative emit nothing; a vanishing
/// discriminant emits the double root once. Output order is row-major in
/// (x, y) and deterministic.
pub fn surface_mesh(
    level: SurfaceLevel,
    res: MeshResolution,
    window: MeshWindow,
) -> Vec<SurfaceSample> {
    let mut out = Vec::new();
    let v = level.value();
    for ix in 0..res.nx {
        let x = grid_point(window.x_min, window.x_max, ix, res.nx);
        for iy in 0..res.ny {
            let y = grid_point(window.y_min, window.y_max, iy, res.ny);
            let disc = x * x * y * y - x * x - y * y + 1.0 + v;
            if disc < 0.0 {
                continue;
            }
            let root = math::sqrt(disc);
            out.push(SurfaceSample {
                x,
                y,
                z: x * y + root,
            });
            if root > 0.0 {
                out.push(SurfaceSample {
                    x,
                    y,
                    z: x * y - root,
                });
            }
        }
    }
    out
}

/// i-th of n uniformly spaced points on [lo, hi] (inclusive endpoints).
pub(crate) fn grid_point(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if n <= 1 {
        return lo;
    }
    lo + (hi - lo) * (i as f64 / (n - 1) as f64)
}
