//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by grid, quadrature, symbolic and field operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the domain the operation is defined on.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The sampled function is not negligible at the edge of the periodic box.
    #[error(
        "boundary decay violated: |f| = {boundary:.3e} at the box edge exceeds {tolerance:.1e} x max|f| = {max:.3e}"
    )]
    BoundaryDecay {
        boundary: f64,
        max: f64,
        tolerance: f64,
    },

    /// Two grid functions do not live on the same grid.
    #[error("grid mismatch: (L = {l1}, N = {n1}) vs (L = {l2}, N = {n2})")]
    GridMismatch { l1: f64, n1: usize, l2: f64, n2: usize },

    /// A phase needed by a fractional time factor has no stored sigma.
    #[error("phase {0} has no stored sigma = omega^alpha")]
    MissingSigma(String),

    /// Degenerate soliton parameters (k = 0, k1 + k2 = 0, ...).
    #[error("degenerate soliton parameters: {0}")]
    Degenerate(String),

    /// The tau-function vanishes on the grid, so u = 2 (ln F)_xx is singular.
    #[error("tau-function vanishes at x = {x}, t = {t} (|F| = {magnitude:.3e})")]
    Singular { x: f64, t: f64, magnitude: f64 },

    /// An internal self-check of a special function failed.
    #[error("special function self-check failed: {0}")]
    SelfCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
