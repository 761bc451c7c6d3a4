//! `Γ`, `ψ`, polygamma and `γ` at high precision, derivative jets of `Γ` and
//! `1/Γ`, and the fractional-part kernels built from them.
//!
//! All transcendental values come from an upward argument shift followed by
//! the Euler–Maclaurin (Stirling) asymptotic series with exact Bernoulli
//! coefficients.

mod bernoulli;
mod jet;
mod kernels;
mod special;

pub use bernoulli::bernoulli_even;
pub use jet::{gamma_deriv, recip_gamma_deriv, recip_gamma_jet, GammaDerivs, Jet};
pub use kernels::{derivative_ratio_in_gamma, lambda_ts, lambda_ts_log_poly, y_alpha_i};
pub use special::{euler_gamma, gamma_float, gamma_value, ln_gamma_float, polygamma, psi};
