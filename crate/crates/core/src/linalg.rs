//! Small dense linear algebra: row-major square matrices and a symmetric
//! eigensolver (Householder tridiagonalization followed by implicit-shift
//! QL, the classic EISPACK tred2/tql2 pair).
//!
//! Sized for the fermion oracle (a few thousand rows at most); no blocking,
//! no pivoting, nothing clever.

// The eigensolver is a faithful port of the classical index-based routines.
#![allow(clippy::needless_range_loop)]

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.add_to(i, j, aik * rhs.get(k, j));
                }
            }
        }
        out
    }

    /// y = A·x.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let mut acc = 0.0;
            for j in 0..self.n {
                acc += self.get(i, j) * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(math::abs(v)))
    }
}

/// Eigendecomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Eigenvalues and eigenvectors of a real symmetric matrix.
///
/// Input is symmetrized from its lower triangle, reduced to tridiagonal form
/// by Householder reflections (with transform accumulation), then
/// diagonalized by the implicit-shift QL iteration. Non-convergence after
/// 50 sweeps on any eigenvalue reports `EigenDiverged`.
pub fn symmetric_eigen(a: &Matrix) -> Result<SymmetricEigen> {
    let n = a.size();
    if n == 0 {
        return Err(CoreError::Domain("eigensolver needs n >= 1"));
    }
    let mut z = a.clone();
    for i in 0..n {
        for j in 0..i {
            let v = z.get(i, j);
            z.set(j, i, v);
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, &mut d, &mut e);
    tql2(&mut z, &mut d, &mut e)?;

    // Sort ascending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Matrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, new_col, z.get(row, old_col));
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Householder reduction of a symmetric matrix to tridiagonal form with
/// accumulated transforms (tred2). On exit `a` holds the orthogonal matrix,
/// `d` the diagonal and `e[1..]` the sub-diagonal.
fn tred2(a: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = a.size();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += math::abs(a.get(i, k));
            }
            if scale == 0.0 {
                e[i] = a.get(i, l);
            } else {
                for k in 0..=l {
                    let v = a.get(i, k) / scale;
                    a.set(i, k, v);
                    h += v * v;
                }
                let f = a.get(i, l);
                let g = if f >= 0.0 {
                    -math::sqrt(h)
                } else {
                    math::sqrt(h)
                };
                e[i] = scale * g;
                h -= f * g;
                a.set(i, l, f - g);
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a.set(j, i, a.get(i, j) / h);
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a.get(j, k) * a.get(i, k);
                    }
                    for k in (j + 1)..=l {
                        g_acc += a.get(k, j) * a.get(i, k);
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a.get(i, j);
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a.get(i, j);
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let v = a.get(j, k) - (f * e[k] + g * a.get(i, k));
                        a.set(j, k, v);
                    }
                }
            }
        } else {
            e[i] = a.get(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a.get(i, k) * a.get(k, j);
                }
                for k in 0..i {
                    let v = a.get(k, j) - g * a.get(k, i);
                    a.set(k, j, v);
                }
            }
        }
        d[i] = a.get(i, i);
        a.set(i, i, 1.0);
        for j in 0..i {
            a.set(j, i, 0.0);
            a.set(i, j, 0.0);
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix with
/// eigenvector accumulation (tql2). `d` holds the diagonal in, eigenvalues
/// out; `e[1..]` the sub-diagonal (destroyed); `z` the accumulated
/// transforms in, eigenvectors (as columns) out.
fn tql2(z: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = math::abs(d[m]) + math::abs(d[m + 1]);
                if math::abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(CoreError::EigenDiverged { index: l, size: n });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            let sign_r = if g >= 0.0 {
                math::abs(r)
            } else {
                -math::abs(r)
            };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = math::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z.get(k, i + 1);
                    z.set(k, i + 1, s * z.get(k, i) + c * f);
                    z.set(k, i, c * z.get(k, i) - s * f);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
