//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distribution parameter is out of its domain (e.g. `beta <= 0`).
    InvalidParameter { name: &'static str, value: f64 },
    /// An evaluation point was NaN or infinite.
    NonFiniteInput { name: &'static str, value: f64 },
    /// A probability argument outside the open interval (0, 1).
    InvalidProbability { value: f64 },
    /// The mgf argument is outside the convergence strip `-1 < t < 1`.
    MgfOutOfDomain { t: f64 },
    /// The generalized family is indeterminate at `lambda = 0`.
    LambdaZero,
    /// The log family is supported on positive reals only.
    NonPositiveSupport { value: f64 },
    /// Adaptive quadrature did not reach the requested tolerance.
    QuadratureNoConvergence { estimate: f64, error_bound: f64 },
    /// The integrand returned a non-finite value.
    QuadratureNonFinite { at: f64 },
    /// The rejection-sampler envelope bound was exceeded (should not happen).
    EnvelopeViolation { z: f64, ratio: f64, bound: f64 },
    /// A dataset with no observations.
    EmptyData,
    /// A dataset observation that is NaN or infinite.
    NonFiniteData { index: usize, value: f64 },
    /// Data with zero spread cannot seed or support a fit.
    DegenerateData,
    /// A parameter vector whose length does not match the family arity.
    ArityMismatch { family: &'static str, expected: usize, got: usize },
    /// Model comparison needs at least two families.
    TooFewFamilies { got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name}: {value}")
            }
            Error::NonFiniteInput { name, value } => {
                write!(f, "non-finite input {name}: {value}")
            }
            Error::InvalidProbability { value } => {
                write!(f, "probability must lie in (0, 1), got {value}")
            }
            Error::MgfOutOfDomain { t } => {
                write!(f, "mgf is defined for -1 < t < 1, got t = {t}")
            }
            Error::LambdaZero => {
                write!(f, "the generalized family is indeterminate at lambda = 0")
            }
            Error::NonPositiveSupport { value } => {
                write!(f, "the log family is supported on z > 0, got {value}")
            }
            Error::QuadratureNoConvergence { estimate, error_bound } => {
                write!(
                    f,
                    "quadrature failed to converge: estimate {estimate}, error bound {error_bound}"
                )
            }
            Error::QuadratureNonFinite { at } => {
                write!(f, "integrand returned a non-finite value near {at}")
            }
            Error::EnvelopeViolation { z, ratio, bound } => {
                write!(f, "envelope violated at z = {z}: ratio {ratio} > bound {bound}")
            }
            Error::EmptyData => write!(f, "dataset is empty"),
            Error::NonFiniteData { index, value } => {
                write!(f, "non-finite observation {value} at index {index}")
            }
            Error::DegenerateData => write!(f, "data has zero spread"),
            Error::ArityMismatch { family, expected, got } => {
                write!(f, "{family} takes {expected} parameters, got {got}")
            }
            Error::TooFewFamilies { got } => {
                write!(f, "model comparison needs at least 2 families, got {got}")
            }
        }
    }
}

impl std::error::Error for Error {}
