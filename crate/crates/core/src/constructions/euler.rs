//! `P_n → γ` from `log(1-z)/(1-z) - E(-z/(1-z))/(1-z)`, `E(z) = Σ z^n/(n! n)`.

use rug::Rational;

use super::{ApproximationRun, Method, RunLabel};
use crate::holonomic::{DifferentialOperator, HolonomicSequence, LinearRecurrence};
use crate::numcore::{binomial, factorial_q, PolyQ};
use crate::par::{self, Execution};
use crate::series::{self, EFunction, TruncatedSeries};
use crate::Result;

pub fn euler_operator() -> DifferentialOperator {
    DifferentialOperator::new(vec![
        PolyQ::from_ints(&[-1, 2, -2]),
        PolyQ::from_ints(&[1, -5, 8, -4]),
        PolyQ::from_ints(&[0, 1, -3, 3, -1]),
    ])
    .expect("nonzero operator")
}

/// `(n+3)² P_{n+3} - (3n²+14n+17) P_{n+2} + (n+2)(3n+5) P_{n+1} - (n+1)(n+2) P_n = 0`
pub fn euler_recurrence() -> LinearRecurrence {
    LinearRecurrence::new(vec![
        -&(PolyQ::linear(1) * PolyQ::linear(2)),
        PolyQ::linear(2) * PolyQ::from_ints(&[5, 3]),
        PolyQ::from_ints(&[-17, -14, -3]),
        PolyQ::linear(3) * PolyQ::linear(3),
    ])
    .expect("valid recurrence")
}

pub fn euler_generating_function(n_terms: usize) -> Result<TruncatedSeries> {
    let e = series::efunction_series(&EFunction::ELog, n_terms)?;
    let composed = e.compose(&series::neg_z_over_one_minus_z(n_terms))?;
    let tail = series::geometric(n_terms).mul(&composed);
    Ok(series::log_over_one_minus_z(n_terms).sub(&tail))
}

pub fn euler_values(n_terms: usize, method: Method, exec: Execution) -> Result<Vec<Rational>> {
    match method {
        Method::Closed => Ok(closed(n_terms, exec)),
        Method::Recurrence => {
            let init = vec![Rational::new(), Rational::new(), Rational::from((1, 4))];
            HolonomicSequence::new(euler_recurrence(), init)?.unroll(n_terms)
        }
        Method::Series => Ok(euler_generating_function(n_terms)?.into_coeffs()),
    }
}

/// `P_n = Σ_{k=1}^{n} (-1)^k binom(n,k) (1/k) (1 - 1/k!)`.
fn closed(n_terms: usize, exec: Execution) -> Vec<Rational> {
    let weights: Vec<Rational> = (0..n_terms as u32)
        .map(|k| {
            if k == 0 {
                return Rational::new();
            }
            let w = (Rational::from(1) - factorial_q(k).recip()) / k;
            if k % 2 == 1 {
                -w
            } else {
                w
            }
        })
        .collect();
    par::map_range(exec, n_terms, |n| {
        (1..=n)
            .filter(|&k| weights[k] != 0)
            .map(|k| Rational::from(binomial(n as u32, k as u32)) * &weights[k])
            .sum()
    })
}

pub fn euler_seq(n_terms: usize, method: Method, prec: u32) -> Result<ApproximationRun> {
    let values = euler_values(n_terms, method, Execution::default())?;
    ApproximationRun::build(RunLabel::Euler, values, method, prec)
}
