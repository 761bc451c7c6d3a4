//! Exact rational and polynomial arithmetic, and the precision policy for
//! floating-point results.
//!
//! Rationals are GMP rationals: canonical (lowest terms, positive
//! denominator) after every operation. Floating-point values are MPFR
//! floats carrying an explicit precision in bits.

pub(crate) mod poly;
mod real;

pub use poly::PolyQ;
pub use real::{
    double_run, format_digits, rel_diff, to_float, within_rel, DEFAULT_PREC, PREC_ENV_VAR,
};
pub use rug::Rational;

use rug::Integer;

/// Rising factorial `a (a+1) ⋯ (a+n-1)`; `1` for `n = 0`.
pub fn pochhammer(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::from(1);
    let mut term = a.clone();
    for _ in 0..n {
        acc *= &term;
        term += 1u32;
    }
    acc
}

/// Generalized binomial `binom(n+α, k+α) = ∏_{j=k+1}^{n} (j+α) / (n-k)!`.
///
/// Panics if `k > n`.
pub fn binomial_general(n: u32, k: u32, alpha: &Rational) -> Rational {
    assert!(
        k <= n,
        "binomial_general requires k <= n (k = {k}, n = {n})"
    );
    let mut num = Rational::from(1);
    for j in (k + 1)..=n {
        num *= Rational::from(j) + alpha;
    }
    num / factorial(n - k)
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// `n!` as a rational, convenient for coefficient formulas.
pub fn factorial_q(n: u32) -> Rational {
    Rational::from(factorial(n))
}

/// Floor of a rational as a machine integer.
pub fn floor_i64(x: &Rational) -> i64 {
    let (_, floor) = x.clone().fract_floor(Integer::new());
    floor.to_i64().expect("floor out of i64 range")
}

/// Fractional part `{x} ∈ [0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    let (fract, _) = x.clone().fract_floor(Integer::new());
    fract
}

/// Returns the value as `i64` if `x` is an integer that fits.
pub fn as_integer(x: &Rational) -> Option<i64> {
    if *x.denom() == 1 {
        x.numer().to_i64()
    } else {
        None
    }
}

/// True for `0, -1, -2, …`.
pub fn is_nonpositive_integer(x: &Rational) -> bool {
    matches!(as_integer(x), Some(v) if v <= 0)
}
