use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

/// Dense univariate polynomial over `ℚ`, lowest degree first.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial
/// has an empty coefficient list and [`PolyQ::degree`] returns `None`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `x + c`.
    pub fn linear(c: impl Into<Rational>) -> Self {
        Self::new(vec![c.into(), Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation, exact.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> Rational {
        self.eval(&Rational::from(x))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * s)).collect())
    }

    /// `p(x + k)`.
    pub fn shift(&self, k: &Rational) -> Self {
        let lin = PolyQ::linear(k.clone());
        let mut acc = PolyQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &PolyQ::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u32))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &PolyQ) -> (PolyQ, PolyQ) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::new(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = Rational::from(&rem[top] / &lead);
            let shift = top - dd;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[shift + i] -= Rational::from(&c * dc);
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|c| *c == 0) {
                rem.pop();
            }
        }
        (PolyQ::new(quot), PolyQ::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &PolyQ) -> PolyQ {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> PolyQ {
        match self.leading() {
            None => PolyQ::zero(),
            Some(l) => self.scale(&Rational::from(l.recip_ref())),
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients (sign is left unchanged). Returns 1 for the zero
    /// polynomial.
    pub fn content(&self) -> Rational {
        content_of(self.coeffs.iter())
    }

    /// Display in a named variable, highest degree first.
    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, var }
    }
}

/// Positive content of a collection of rationals: `gcd(numerators) /
/// lcm(denominators)`.
pub(crate) fn content_of<'a>(coeffs: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut g = Integer::new();
    let mut l = Integer::from(1);
    for c in coeffs {
        g.gcd_mut(c.numer());
        l.lcm_mut(c.denom());
    }
    if g == 0 {
        Rational::from(1)
    } else {
        Rational::from((g, l))
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        if self.is_zero() || rhs.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        PolyQ::new(out)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyQ {
            type Output = PolyQ;
            fn $m(self, rhs: PolyQ) -> PolyQ {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

struct PolyDisplay<'a> {
    poly: &'a PolyQ,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.poly.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs == 1 && i > 0;
            if !unit {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 if unit => write!(f, "{}", self.var)?,
                1 => write!(f, "*{}", self.var)?,
                _ if unit => write!(f, "{}^{}", self.var, i)?,
                _ => write!(f, "*{}^{}", self.var, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        assert_eq!(PolyQ::zero().eval(&Rational::from((3, 7))), 0);
        // leading coefficient of the Γ(α) operator vanishes at z = 1
        let lead = PolyQ::from_ints(&[0, 1, -3, 3, -1]);
        assert_eq!(lead.eval_i64(1), 0);
        assert_eq!(PolyQ::from_ints(&[-2, 1]).eval_i64(1), -1);
    }

    #[test]
    fn trimming_and_degree() {
        assert_eq!(PolyQ::from_ints(&[0, 0, 0]).degree(), None);
        assert_eq!(PolyQ::from_ints(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn gcd_of_products() {
        let a = PolyQ::linear(1) * PolyQ::linear(2);
        let b = PolyQ::linear(2) * PolyQ::linear(5);
        assert_eq!(a.gcd(&b), PolyQ::linear(2));
        assert_eq!(PolyQ::zero().gcd(&PolyQ::zero()), PolyQ::zero());
    }

    #[test]
    fn shift_matches_substitution() {
        let p = PolyQ::from_ints(&[17, 14, 3]);
        let s = p.shift(&Rational::from(2));
        for x in -5..5 {
            assert_eq!(s.eval_i64(x), p.eval_i64(x + 2));
        }
    }

    #[test]
    fn content_examples() {
        let p = PolyQ::new(vec![Rational::from((2, 3)), Rational::from((4, 9))]);
        assert_eq!(p.content(), Rational::from((2, 9)));
        assert_eq!(PolyQ::zero().content(), 1);
    }

    #[test]
    fn display() {
        let p = PolyQ::from_ints(&[9, 6, 1]);
        assert_eq!(p.display_in("n").to_string(), "n^2 + 6*n + 9");
        assert_eq!(PolyQ::from_ints(&[-2, 1]).to_string(), "x - 2");
    }

    fn poly() -> impl Strategy<Value = PolyQ> {
        proptest::collection::vec((-20i64..20, 1i64..6), 0..5)
            .prop_map(|v| PolyQ::new(v.into_iter().map(|(n, d)| Rational::from((n, d))).collect()))
    }

    proptest! {
        #[test]
        fn div_rem_reconstructs(a in poly(), b in poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn gcd_divides(a in poly(), b in poly()) {
            let g = a.gcd(&b);
            if !g.is_zero() {
                prop_assert!(a.div_rem(&g).1.is_zero());
                prop_assert!(b.div_rem(&g).1.is_zero());
            }
        }
    }
}
