//! Zeros of truncated Riemann-Xi approximates and related L-function
//! approximates, written as finite sums of hyperbolic gamma functions.

pub mod error;
pub mod asymptotics;
pub mod expr;
pub mod homotopy;
pub mod mcurve;
pub mod models;
pub mod number_theory;
pub mod precision;
pub mod special;
pub mod zeros;

pub use error::{Error, Result};
pub use precision::{Complex, PrecisionContext, Real};
