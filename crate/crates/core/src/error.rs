//! Error type shared by all model operations.

use thiserror::Error;

/// Errors produced by the steady-state model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A physical parameter failed validation. `name` is the offending field.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The adaptive quadrature could not reach its error target.
    #[error(
        "quadrature did not converge: achieved relative error {achieved:.3e}, target {target:.3e}"
    )]
    QuadratureNonConvergence { achieved: f64, target: f64 },

    /// An output intensity outside the reachable range `0 <= i_t < T/(2b)`.
    #[error("output intensity {i_t} out of range: must satisfy 0 <= i_t < {limit} = T/(2b)")]
    IntensityOutOfRange { i_t: f64, limit: f64 },

    /// A hysteresis sweep was asked to exceed the traced curve's coverage.
    #[error("input intensity {requested} exceeds the traced curve's coverage (max reachable {available})")]
    CoverageExceeded { requested: f64, available: f64 },

    /// Curves passed to a collapse comparison carry different cavity configs.
    #[error("curves have mismatched cavity configurations")]
    CavityMismatch,

    /// A collapse comparison received inconsistent inputs.
    #[error("invalid collapse input: {0}")]
    InvalidCollapse(String),
}

impl ModelError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        ModelError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
