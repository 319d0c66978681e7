//! Spectral fractional derivatives, the fractional Hirota bilinear operator and
//! tau-function solitons of a time-fractional KdV equation.
//!
//! - [`grid`]: periodic grids, the multiplier `(ik)^alpha`, discrete Sobolev norms.
//! - [`marchaud`]: the singular-integral form of the same operator, by quadrature.
//! - [`bilinear`]: commutator, symbol and kernel forms of `D^alpha f . g`.
//! - [`expsum`]: exact exponential sums and symbolic Hirota operators.
//! - [`kdv`]: fields from tau-functions, profiles and PDE residuals.
//! - [`suite`]: the verification battery.

pub mod bilinear;
pub mod error;
pub mod expsum;
pub mod grid;
pub mod kdv;
pub mod marchaud;
pub mod report;
pub mod special;
pub mod suite;

pub use error::{Error, Result};
pub use grid::{FractionalOrder, GridFunction};
pub use num_complex::Complex64;
