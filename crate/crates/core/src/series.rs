//! Truncated formal power series over `ℚ`.
//!
//! A [`TruncatedSeries`] stores the coefficients of `z^0 … z^{order-1}` and
//! nothing else: every operation returns only the coefficients it can
//! guarantee, so two series compare equal only on a range where both are
//! known exactly.

use std::fmt;

use rug::Rational;

use crate::numcore::{factorial_q, is_nonpositive_integer, PolyQ};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// The E-functions (and Bessel-type companions) used by the constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EFunction {
    /// `Σ z^n / n!`
    Exp,
    /// `E_α(z) = Σ z^n / (n! (n + α))`
    EAlpha(Rational),
    /// `E(z) = Σ_{n≥1} z^n / (n! n)`
    ELog,
    /// `F(x) = Σ x^n / n!²`, stored in `x = z²`
    FBessel,
    /// `G(x) = -2 Σ H_n x^n / n!²`, stored in `x = z²`
    GBessel,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Rational::new(); order])
    }

    pub fn one(order: usize) -> Self {
        Self::from_poly(&PolyQ::constant(1), order)
    }

    /// An exact polynomial viewed as a series known to `order`.
    pub fn from_poly(p: &PolyQ, order: usize) -> Self {
        Self::new((0..order).map(|i| p.coeff(i)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `z^n`; panics if `n` is beyond the guaranteed order.
    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..order.min(self.order())].to_vec())
    }

    /// Index of the first nonzero coefficient, `None` if all known ones vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * s)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }

    pub fn add(&self, g: &Self) -> Self {
        let n = self.order().min(g.order());
        Self::new(
            (0..n)
                .map(|i| Rational::from(&self.coeffs[i] + &g.coeffs[i]))
                .collect(),
        )
    }

    pub fn sub(&self, g: &Self) -> Self {
        let n = self.order().min(g.order());
        Self::new(
            (0..n)
                .map(|i| Rational::from(&self.coeffs[i] - &g.coeffs[i]))
                .collect(),
        )
    }

    pub fn mul(&self, g: &Self) -> Self {
        mul_truncated(&self.coeffs, &g.coeffs, self.order().min(g.order()))
    }

    pub fn div(&self, g: &Self) -> Result<Self> {
        let n = self.order().min(g.order());
        if n == 0 {
            return Ok(Self::zero(0));
        }
        if g.coeffs[0] == 0 {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = Rational::from(g.coeffs[0].recip_ref());
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                if g.coeffs[j] != 0 {
                    acc -= Rational::from(&g.coeffs[j] * &out[k - j]);
                }
            }
            out.push(acc * &inv0);
        }
        Ok(Self::new(out))
    }

    pub fn arith(&self, g: &Self, op: SeriesOp) -> Result<Self> {
        Ok(match op {
            SeriesOp::Add => self.add(g),
            SeriesOp::Sub => self.sub(g),
            SeriesOp::Mul => self.mul(g),
            SeriesOp::Div => self.div(g)?,
        })
    }

    /// `f(g(z))` for `g(0) = 0`.
    ///
    /// If `f` is known to order `F`, `g` to order `G` with valuation `v`,
    /// the result is known to order `min(F v, G)`. Evaluated as
    /// `Σ f_k g^k` with each power truncated to the result order.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if g.order() == 0 {
            return Ok(Self::zero(0));
        }
        if g.coeffs[0] != 0 {
            return Err(Error::NonzeroConstantTerm);
        }
        let v = g.valuation().unwrap_or(g.order());
        let order = self.order().saturating_mul(v).min(g.order());
        let mut out = vec![Rational::new(); order];
        if order == 0 {
            return Ok(Self::new(out));
        }
        let mut power = TruncatedSeries::one(order);
        for (k, fk) in self.coeffs.iter().enumerate() {
            if k * v >= order {
                break;
            }
            if k > 0 {
                power = power.mul(&g.truncate(order));
            }
            if *fk == 0 {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&power.coeffs).skip(k * v) {
                if *p != 0 {
                    *o += Rational::from(fk * p);
                }
            }
        }
        Ok(Self::new(out))
    }

    /// Coefficientwise product.
    pub fn hadamard(&self, g: &Self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .zip(&g.coeffs)
                .map(|(a, b)| Rational::from(a * b))
                .collect(),
        )
    }

    /// Formal derivative (order drops by one).
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| Rational::from(c * n as u32))
                .collect(),
        )
    }

    /// Product with an exact polynomial; the order is preserved.
    pub fn mul_poly(&self, p: &PolyQ) -> Self {
        mul_truncated(&self.coeffs, p.coeffs(), self.order())
    }
}

fn mul_truncated(a: &[Rational], b: &[Rational], order: usize) -> TruncatedSeries {
    let mut out = vec![Rational::new(); order];
    for (i, x) in a.iter().enumerate().take(order) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order - i) {
            if *y != 0 {
                out[i + j] += Rational::from(x * y);
            }
        }
    }
    TruncatedSeries::new(out)
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})z^{n}")?;
        }
        write!(f, " + O(z^{})", self.order())
    }
}

/// `1/(1-z)`.
pub fn geometric(order: usize) -> TruncatedSeries {
    TruncatedSeries::new(vec![Rational::from(1); order])
}

/// `(1-z)^{-β}`: coefficient `n` is `(β)_n / n!`.
pub fn binomial_series(beta: &Rational, order: usize) -> TruncatedSeries {
    let mut out = Vec::with_capacity(order);
    let mut c = Rational::from(1);
    for n in 0..order {
        out.push(c.clone());
        c *= Rational::from(beta + n as u32) / (n as u32 + 1);
    }
    TruncatedSeries::new(out)
}

/// `log(1-z)/(1-z)`: coefficient `n` is `-H_n`.
pub fn log_over_one_minus_z(order: usize) -> TruncatedSeries {
    let mut out = Vec::with_capacity(order);
    let mut h = Rational::new();
    for n in 0..order {
        if n > 0 {
            h += Rational::from((1, n as u32));
        }
        out.push(Rational::from(-&h));
    }
    TruncatedSeries::new(out)
}

/// The inner substitution `-z/(1-z)`.
pub fn neg_z_over_one_minus_z(order: usize) -> TruncatedSeries {
    TruncatedSeries::new(
        (0..order)
            .map(|n| Rational::from(if n == 0 { 0 } else { -1 }))
            .collect(),
    )
}

pub fn efunction_series(which: &EFunction, order: usize) -> Result<TruncatedSeries> {
    let mut out = Vec::with_capacity(order);
    match which {
        EFunction::Exp => {
            let mut c = Rational::from(1);
            for n in 0..order {
                out.push(c.clone());
                c /= n as u32 + 1;
            }
        }
        EFunction::EAlpha(alpha) => {
            if is_nonpositive_integer(alpha) {
                return Err(Error::domain(format!(
                    "E_alpha is undefined for nonpositive integer alpha = {alpha}"
                )));
            }
            let mut inv_fact = Rational::from(1);
            for n in 0..order {
                out.push(&inv_fact / Rational::from(alpha + n as u32));
                inv_fact /= n as u32 + 1;
            }
        }
        EFunction::ELog => {
            for n in 0..order {
                out.push(if n == 0 {
                    Rational::new()
                } else {
                    factorial_q(n as u32).recip() / n as u32
                });
            }
        }
        EFunction::FBessel | EFunction::GBessel => {
            let mut inv_fact_sq = Rational::from(1);
            let mut h = Rational::new();
            for n in 0..order {
                if n > 0 {
                    inv_fact_sq /= (n * n) as u32;
                    h += Rational::from((1, n as u32));
                }
                out.push(match which {
                    EFunction::FBessel => inv_fact_sq.clone(),
                    _ => Rational::from(&h * &inv_fact_sq) * -2,
                });
            }
        }
    }
    Ok(TruncatedSeries::new(out))
}
