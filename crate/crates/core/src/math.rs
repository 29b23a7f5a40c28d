//! Float intrinsics routed through `std` when available, `libm` otherwise.
//!
//! The crate is `no_std`-compatible; the transcendental methods on `f64`
//! live in `std`, so every use site goes through this shim.

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn sqrt(x: f64) -> f64 {
    x.sqrt()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn abs(x: f64) -> f64 {
    x.abs()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn cos(x: f64) -> f64 {
    x.cos()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn ln(x: f64) -> f64 {
    x.ln()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn floor(x: f64) -> f64 {
    x.floor()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn ceil(x: f64) -> f64 {
    x.ceil()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    x.hypot(y)
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// Scaled deviation |a − b| / max(1, |a|, |b|); the residual used by the
/// identity checks throughout the crate.
#[inline]
pub fn rel_residual(a: f64, b: f64) -> f64 {
    let scale = 1.0f64.max(abs(a)).max(abs(b));
    abs(a - b) / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rel_residual_small_values_absolute() {
        assert_eq!(rel_residual(0.0, 1e-13), 1e-13);
    }

    #[test]
    fn rel_residual_large_values_relative() {
        let r = rel_residual(1e10, 1e10 + 1.0);
        assert!(r > 0.0 && r < 1.1e-10);
    }
}
