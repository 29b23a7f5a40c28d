//! Error type shared by all modules of the crate.

use core::fmt;

/// Errors reported by the numerical kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Couplings must satisfy J0 > 0, J1 > 0.
    InvalidCoupling { j0: f64, j1: f64 },
    /// The spectral variable s must be finite and non-negative.
    InvalidSpectral(f64),
    /// The surface level V must be finite and non-negative.
    InvalidSurfaceLevel(f64),
    /// A word would exceed the configured letter-capacity cap.
    WordCapacity { level: usize, cap: u64 },
    /// An input point had a non-finite component.
    NonFiniteInput,
    /// A parameter was outside the domain of the operation.
    Domain(&'static str),
    /// Trace recursion overflowed before an escape witness certified it.
    UncertifiedOverflow { step: usize },
    /// The eigensolver failed to converge.
    EigenDiverged { index: usize, size: usize },
    /// Lattice size below the minimum for the ring construction.
    LatticeTooSmall { size: u64, min: u64 },
    /// An operation requiring a nonempty set received an empty one.
    EmptySet(&'static str),
    /// Nested covers failed containment beyond tolerance for every probed offset.
    NestingUnresolved { max_offset: usize },
    /// A precondition on orbit classification was violated.
    Precondition(&'static str),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::InvalidCoupling { j0, j1 } => {
                write!(f, "couplings must be positive, got J0={j0}, J1={j1}")
            }
            CoreError::InvalidSpectral(s) => {
                write!(f, "spectral variable must be finite and >= 0, got {s}")
            }
            CoreError::InvalidSurfaceLevel(v) => {
                write!(f, "surface level must be finite and >= 0, got {v}")
            }
            CoreError::WordCapacity { level, cap } => {
                write!(
                    f,
                    "word at level {level} exceeds the capacity cap of {cap} letters"
                )
            }
            CoreError::NonFiniteInput => write!(f, "input point has a non-finite component"),
            CoreError::Domain(what) => write!(f, "domain error: {what}"),
            CoreError::UncertifiedOverflow { step } => {
                write!(
                    f,
                    "trace recursion overflowed at step {step} before an escape witness"
                )
            }
            CoreError::EigenDiverged { index, size } => {
                write!(
                    f,
                    "eigensolver failed to converge at index {index} (matrix size {size})"
                )
            }
            CoreError::LatticeTooSmall { size, min } => {
                write!(
                    f,
                    "lattice size {size} below minimum {min} for the ring construction"
                )
            }
            CoreError::EmptySet(what) => write!(f, "empty set: {what}"),
            CoreError::NestingUnresolved { max_offset } => {
                write!(f, "nesting violated for every offset N <= {max_offset}")
            }
            CoreError::Precondition(what) => write!(f, "precondition violated: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}

pub type Result<T> = core::result::Result<T, CoreError>;
