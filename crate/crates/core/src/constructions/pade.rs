//! Diagonal Padé approximants to `exp`, convergents of `e`, and the
//! generic continued-fraction convergent recursion.

use rug::{Integer, Rational};

use crate::numcore::{binomial, factorial, factorial_q, PolyQ};
use crate::series::{efunction_series, EFunction, TruncatedSeries};
use crate::{Error, Result};

/// `(P_n, Q_n)` with `Q_n(z) e^z - P_n(z) = O(z^{2n+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadePair {
    pub n: u32,
    pub p: PolyQ,
    pub q: PolyQ,
}

/// `Q_n(z) = Σ_{k=0}^{n} (-1)^{n-k} binom(2n-k, n) z^k / k!`, and `P_n` the
/// degree-`n` truncation of `Q_n(z) e^z`.
pub fn pade_exp(n: u32) -> PadePair {
    let q = PolyQ::new(
        (0..=n)
            .map(|k| {
                let c = Rational::from(binomial(2 * n - k, n)) / factorial_q(k);
                if (n - k) % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect(),
    );
    let order = n as usize + 1;
    let exp = efunction_series(&EFunction::Exp, order).expect("exp series");
    let p = TruncatedSeries::from_poly(&q, order).mul(&exp);
    PadePair {
        n,
        p: PolyQ::new(p.into_coeffs()),
        q,
    }
}

/// `-Q_n(-z)`, an alternative sign convention for the numerator.
/// The truncation definition equals `+Q_n(-z)`; both are kept so reports
/// can show which one meets the order condition.
pub fn pade_negated_reflection(n: u32) -> PolyQ {
    let q = pade_exp(n).q;
    let reflected = PolyQ::new(
        q.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k % 2 == 1 {
                    Rational::from(-c)
                } else {
                    c.clone()
                }
            })
            .collect(),
    );
    -&reflected
}

/// `Q e^z - P` to order `order`.
pub fn pade_remainder(pair: &PadePair, order: usize) -> TruncatedSeries {
    let exp = efunction_series(&EFunction::Exp, order).expect("exp series");
    TruncatedSeries::from_poly(&pair.q, order)
        .mul(&exp)
        .sub(&TruncatedSeries::from_poly(&pair.p, order))
}

/// `(|n! P_n(1)|, |n! Q_n(1)|)`.
pub fn e_convergents(n: u32) -> Result<(Integer, Integer)> {
    if n == 0 {
        return Err(Error::domain("e_convergents requires n >= 1"));
    }
    let pair = pade_exp(n);
    let one = Rational::from(1);
    let nf = Rational::from(factorial(n));
    let to_int = |r: Rational| -> Integer {
        debug_assert_eq!(*r.denom(), 1);
        r.into_numer_denom().0.abs()
    };
    Ok((
        to_int(pair.p.eval(&one) * &nf),
        to_int(pair.q.eval(&one) * &nf),
    ))
}

/// `Q_{n+1}(z)/Q_n(z)`.
pub fn pade_q_ratio(n: u32, z: &Rational) -> Rational {
    pade_exp(n + 1).q.eval(z) / pade_exp(n).q.eval(z)
}

/// Convergents `p_k/q_k` of `[a_0; a_1, a_2, …]`.
pub fn cf_convergents(quotients: &[Integer]) -> Result<Vec<Rational>> {
    if let Some(i) = quotients.iter().skip(1).position(|a| *a <= 0) {
        return Err(Error::domain(format!(
            "partial quotient {} at index {} is not positive",
            quotients[i + 1],
            i + 1
        )));
    }
    let (mut p_prev, mut q_prev) = (Integer::from(1), Integer::from(0));
    let (mut p_prev2, mut q_prev2) = (Integer::from(0), Integer::from(1));
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let p = Integer::from(a * &p_prev) + &p_prev2;
        let q = Integer::from(a * &q_prev) + &q_prev2;
        out.push(Rational::from((p.clone(), q.clone())));
        p_prev2 = std::mem::replace(&mut p_prev, p);
        q_prev2 = std::mem::replace(&mut q_prev, q);
    }
    Ok(out)
}

/// Partial quotients of `e = [2; 1, 2, 1, 1, 4, 1, 1, 6, …]`.
pub fn e_cf_quotients(len: usize) -> Vec<Integer> {
    (0..len)
        .map(|i| {
            if i == 0 {
                Integer::from(2)
            } else if i % 3 == 2 {
                Integer::from(2 * (i / 3 + 1))
            } else {
                Integer::from(1)
            }
        })
        .collect()
}

/// Position of `num/den` in the convergent list of `e`, searched among the
/// first `max_len` convergents.
pub fn e_convergent_index(num: &Integer, den: &Integer, max_len: usize) -> Option<usize> {
    let target = Rational::from((num.clone(), den.clone()));
    cf_convergents(&e_cf_quotients(max_len))
        .ok()?
        .iter()
        .position(|c| *c == target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn small_pade_pairs() {
        let p0 = pade_exp(0);
        assert_eq!(
            (p0.p.clone(), p0.q.clone()),
            (PolyQ::from_ints(&[1]), PolyQ::from_ints(&[1]))
        );
        let p1 = pade_exp(1);
        assert_eq!(p1.q, PolyQ::from_ints(&[-2, 1]));
        assert_eq!(p1.p, PolyQ::from_ints(&[-2, -1]));
        let p2 = pade_exp(2);
        assert_eq!(p2.q, PolyQ::new(vec![q(6, 1), q(-3, 1), q(1, 2)]));
        assert_eq!(p2.p, PolyQ::new(vec![q(6, 1), q(3, 1), q(1, 2)]));
        let r = pade_remainder(&p2, 5);
        assert!(r.is_zero());
        assert!(!pade_remainder(&p2, 6).is_zero());
    }

    #[test]
    fn truncation_equals_reflected_q_not_its_negative() {
        for n in 1..=10 {
            let pair = pade_exp(n);
            let printed = pade_negated_reflection(n);
            assert_eq!(pair.p, -&printed, "n = {n}");
            let wrong = PadePair {
                n,
                p: printed,
                q: pair.q.clone(),
            };
            assert!(!pade_remainder(&wrong, 2 * n as usize + 1).is_zero());
        }
    }

    #[test]
    fn convergents_of_e() {
        assert_eq!(
            e_convergents(1).unwrap(),
            (Integer::from(3), Integer::from(1))
        );
        assert_eq!(
            e_convergents(2).unwrap(),
            (Integer::from(19), Integer::from(7))
        );
        assert_eq!(
            e_convergents(3).unwrap(),
            (Integer::from(193), Integer::from(71))
        );
        assert!(e_convergents(0).is_err());
        // empirical index map n -> 3n - 2
        for n in 1..=8u32 {
            let (a, b) = e_convergents(n).unwrap();
            assert_eq!(e_convergent_index(&a, &b, 40), Some(3 * n as usize - 2));
        }
    }

    #[test]
    fn cf_recursion_examples() {
        let c = cf_convergents(&ints(&[2, 1, 2, 1, 1, 4])).unwrap();
        assert_eq!(
            c,
            vec![q(2, 1), q(3, 1), q(8, 3), q(11, 4), q(19, 7), q(87, 32)]
        );
        assert_eq!(
            cf_convergents(&ints(&[1, 2, 3])).unwrap(),
            vec![q(1, 1), q(3, 2), q(10, 7)]
        );
        assert_eq!(cf_convergents(&ints(&[5])).unwrap(), vec![q(5, 1)]);
        assert!(cf_convergents(&ints(&[1, 0])).is_err());
        assert_eq!(e_cf_quotients(9), ints(&[2, 1, 2, 1, 1, 4, 1, 1, 6]));
    }
}
