//! Log-gamma, upper incomplete gamma and hyperbolic gamma functions.

pub mod gamma;
pub mod hyperbolic;
pub mod incomplete;

pub use gamma::{gamma, log_gamma};
pub use hyperbolic::{
    generalized_hyperbolic_gamma, hyperbolic_gamma, tail_expansion_coefficients, HyperbolicGammaTerm,
    TermValues,
};
pub use incomplete::{scaled_upper_gamma, upper_incomplete_gamma, LnGammaCache, Route};
