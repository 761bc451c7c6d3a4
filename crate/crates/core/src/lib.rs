//! Exact-arithmetic and high-precision laboratory for E-approximation
//! sequences.
//!
//! The crate computes sequences of rationals whose limits are `Γ(α)`,
//! Euler's constant `γ`, `e` and a Bessel-function ratio, each by several
//! independent routes, together with the Gamma-derivative calculus and the
//! truncated divergent expansions that govern their convergence.
//!
//! Module map:
//!
//! * [`numcore`]: exact rationals, polynomials over `ℚ`, precision helpers.
//! * [`series`]: truncated formal power series with order bookkeeping.
//! * [`holonomic`]: differential operators, P-recursive recurrences, unrolling.
//! * [`constructions`]: the concrete approximation sequences and estimators.
//! * [`gammalab`]: `Γ`, `ψ`, polygamma, `γ`, derivative jets and kernels.
//! * [`asymlab`]: truncated asymptotic expansions and direct-summation checks.
//! * [`par`]: data-parallel map helpers with a sequential fallback.

pub mod asymlab;
pub mod constructions;
mod error;
pub mod gammalab;
pub mod holonomic;
pub mod numcore;
pub mod par;
pub mod series;

pub use error::{Error, Result};
pub use numcore::{PolyQ, Rational};
pub use rug::{Float, Integer};
