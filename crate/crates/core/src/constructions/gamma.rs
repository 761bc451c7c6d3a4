//! `P_n(α) → Γ(α)` for rational `α < 1`, `α ∉ ℤ_{≤0}`.
//!
//! Generating function `(1-z)^{-α-1} E_α(-z/(1-z)) = Σ P_n(α) z^n`.

use rug::ops::Pow;
use rug::Rational;

use super::{ApproximationRun, Method, RunLabel};
use crate::holonomic::{DifferentialOperator, HolonomicSequence, LinearRecurrence};
use crate::numcore::{factorial_q, is_nonpositive_integer, PolyQ};
use crate::par::{self, Execution};
use crate::series::{self, EFunction, TruncatedSeries};
use crate::{Error, Result};

pub fn check_gamma_domain(alpha: &Rational) -> Result<()> {
    if is_nonpositive_integer(alpha) {
        return Err(Error::domain(format!(
            "alpha = {alpha} is a nonpositive integer"
        )));
    }
    if *alpha >= 1 {
        return Err(Error::domain(format!(
            "alpha = {alpha}: the sequence converges to Gamma(alpha) only for alpha < 1"
        )));
    }
    Ok(())
}

/// Second-order operator annihilating the generating function.
pub fn gamma_operator(alpha: &Rational) -> DifferentialOperator {
    let a = alpha.clone();
    let a2 = Rational::from(&a * &a);
    let p = |c: [Rational; 5]| PolyQ::new(c.to_vec());
    let r = |x: i64| Rational::from(x);
    // (3z^3 - z^4 - 3z^2 + z)
    let p2 = PolyQ::from_ints(&[0, 1, -3, 3, -1]);
    // 5z^2α - 4z^3 - 2z^3α + 8z^2 + 1 + α - 5z - 4zα
    let p1 = p([
        r(1) + &a,
        r(-5) - Rational::from(&a * 4),
        r(8) + Rational::from(&a * 5),
        r(-4) - Rational::from(&a * 2),
        r(0),
    ]);
    // -1 - 2z^2 - 3z^2α + 2z - α + 4zα - α^2 + 2zα^2 - z^2α^2
    let p0 = p([
        r(-1) - &a - &a2,
        r(2) + Rational::from(&a * 4) + Rational::from(&a2 * 2),
        r(-2) - Rational::from(&a * 3) - &a2,
        r(0),
        r(0),
    ]);
    DifferentialOperator::new(vec![p0, p1, p2]).expect("nonzero operator")
}

/// The third-order recurrence for `P_n(α)` in its published form.
pub fn gamma_recurrence(alpha: &Rational) -> LinearRecurrence {
    let a = alpha.clone();
    let lin = |c: Rational| PolyQ::linear(c);
    let r = |x: i64| Rational::from(x);
    // (n+3)(n+3+α)
    let q3 = &PolyQ::linear(3) * &lin(r(3) + &a);
    // -(3n^2 + 4nα + 14n + α^2 + 9α + 17)
    let q2 = -&PolyQ::new(vec![
        Rational::from(&a * &a) + Rational::from(&a * 9) + 17,
        Rational::from(&a * 4) + 14,
        r(3),
    ]);
    // (3n + 5 + 2α)(n + 2 + α)
    let q1 = &PolyQ::new(vec![Rational::from(&a * 2) + 5, r(3)]) * &lin(r(2) + &a);
    // -(n + 2 + α)(n + 1 + α)
    let q0 = -&(&lin(r(2) + &a) * &lin(r(1) + &a));
    LinearRecurrence::new(vec![q0, q1, q2, q3]).expect("valid recurrence")
}

/// Seed values `P_0, P_1, P_2` from their rational-function formulas.
pub fn gamma_initial_terms(alpha: &Rational) -> [Rational; 3] {
    let a = alpha.clone();
    let a1 = Rational::from(&a + 1);
    let a2 = Rational::from(&a + 2);
    let p0 = Rational::from(a.recip_ref());
    let p1 = (Rational::from(1) + &a + Rational::from(&a * &a)) / Rational::from(&a * &a1);
    let pow = |k: u32| Rational::from((&a).pow(k));
    let num = Rational::from(4) + Rational::from(&a * 5) + pow(2) * 6 + pow(3) * 4 + pow(4);
    let p2 = num / (Rational::from(&a * &a1) * &a2 * 2);
    [p0, p1, p2]
}

/// Generating function to order `n_terms` by series composition.
pub fn gamma_generating_function(alpha: &Rational, n_terms: usize) -> Result<TruncatedSeries> {
    let e = series::efunction_series(&EFunction::EAlpha(alpha.clone()), n_terms)?;
    let inner = series::neg_z_over_one_minus_z(n_terms);
    let pref = series::binomial_series(&Rational::from(alpha + 1), n_terms);
    Ok(pref.mul(&e.compose(&inner)?))
}

/// Exact values `P_0(α) … P_{n_terms-1}(α)`.
pub fn gamma_values(
    alpha: &Rational,
    n_terms: usize,
    method: Method,
    exec: Execution,
) -> Result<Vec<Rational>> {
    check_gamma_domain(alpha)?;
    match method {
        Method::Closed => Ok(closed(alpha, n_terms, exec)),
        Method::Recurrence => {
            let init = gamma_initial_terms(alpha).to_vec();
            HolonomicSequence::new(gamma_recurrence(alpha), init)?.unroll(n_terms)
        }
        Method::Series => Ok(gamma_generating_function(alpha, n_terms)?.into_coeffs()),
    }
}

/// `P_n(α) = Σ_{k=0}^{n} binom(n+α, k+α) (-1)^k / (k! (k+α))`, one
/// independent sum per index.
fn closed(alpha: &Rational, n_terms: usize, exec: Execution) -> Vec<Rational> {
    let weights: Vec<Rational> = (0..n_terms as u32)
        .map(|k| {
            let w = (factorial_q(k) * Rational::from(alpha + k)).recip();
            if k % 2 == 1 {
                -w
            } else {
                w
            }
        })
        .collect();
    par::map_range(exec, n_terms, |n| {
        // binom(n+α, k+α) for k = n, n-1, …, 0
        let mut b = Rational::from(1);
        let mut acc = Rational::new();
        for k in (0..=n).rev() {
            acc += Rational::from(&b * &weights[k]);
            if k > 0 {
                b *= Rational::from(alpha + k as u32) / (n - k + 1) as u32;
            }
        }
        acc
    })
}

pub fn gamma_seq(
    alpha: &Rational,
    n_terms: usize,
    method: Method,
    prec: u32,
) -> Result<ApproximationRun> {
    let values = gamma_values(alpha, n_terms, method, Execution::default())?;
    ApproximationRun::build(
        RunLabel::Gamma {
            alpha: alpha.clone(),
        },
        values,
        method,
        prec,
    )
}
