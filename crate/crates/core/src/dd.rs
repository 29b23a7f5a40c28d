//! Double-double (compensated) arithmetic for the trace recursion.
//!
//! Used as a fallback when a plain f64 trace evaluation overflows before an
//! escape witness has certified the orbit: the scan point is re-evaluated at
//! roughly 106-bit precision. Only the handful of operations the recursion
//! needs are implemented (Dekker/Knuth error-free transformations, no fma).

/// An unevaluated sum hi + lo with |lo| ≤ ½ ulp(hi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // Requires |a| >= |b|.
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    // Dekker split at 27 bits.
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    let err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    Dd { hi: p, lo: err }
}

impl Dd {
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, rhs: Dd) -> Dd {
        let s = two_sum(self.hi, rhs.hi);
        let lo = s.lo + self.lo + rhs.lo;
        quick_two_sum(s.hi, lo)
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    pub fn mul(self, rhs: Dd) -> Dd {
        let p = two_prod(self.hi, rhs.hi);
        let lo = p.lo + self.hi * rhs.lo + self.lo * rhs.hi;
        quick_two_sum(p.hi, lo)
    }

    /// Exact scaling by a power of two.
    pub fn scale2(self) -> Dd {
        Dd {
            hi: 2.0 * self.hi,
            lo: 2.0 * self.lo,
        }
    }

    pub fn abs_hi(self) -> f64 {
        crate::math::abs(self.hi)
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_recovers_cancelled_bits() {
        let a = Dd::from_f64(1e16);
        let b = Dd::from_f64(1.0);
        let sum = a.add(b);
        let diff = sum.sub(a);
        assert_eq!(diff.to_f64(), 1.0);
        assert_eq!(diff.lo, 0.0);
    }

    #[test]
    fn mul_is_exact_for_exactly_representable_products() {
        let eps = 2f64.powi(-30);
        let a = Dd::from_f64(1.0 + eps);
        let sq = a.mul(a);
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60, exactly a hi+lo pair.
        assert_eq!(sq.hi, 1.0 + 2f64.powi(-29));
        assert_eq!(sq.lo, 2f64.powi(-60));
    }

    #[test]
    fn trace_step_matches_f64_on_tame_inputs() {
        let (x, y, z) = (1.25, -0.75, 0.5);
        let dd = Dd::from_f64(x)
            .mul(Dd::from_f64(y))
            .scale2()
            .sub(Dd::from_f64(z));
        assert_eq!(dd.to_f64(), 2.0 * x * y - z);
    }
}
