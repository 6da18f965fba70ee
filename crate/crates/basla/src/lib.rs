//! Balakrishnan alpha skew Laplace (BASLa2) distribution toolkit.
//!
//! Closed-form density/distribution/moment functions for the BASLa2(α, μ, β)
//! family, exact acceptance-rejection sampling, the related extension
//! families (two-parameter, alpha-beta, generalized, log), log-densities for
//! nine competitor families, and a maximum-likelihood fitting engine with
//! AIC/BIC ranking and a nested likelihood-ratio test.

pub mod competitors;
pub mod dist;
pub mod error;
pub mod extensions;
pub mod inference;
pub mod quad;
pub mod sampling;

pub use competitors::{Family, ModelSpec};
pub use dist::{BaslaParams, MixtureDecomposition, MomentBounds, MomentSummary};
pub use error::Error;
pub use inference::{Dataset, FitOptions, FitResult, LrTestResult};
pub use sampling::{RejectionStats, SamplerConfig};
