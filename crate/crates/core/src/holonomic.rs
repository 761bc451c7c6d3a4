//! Linear differential operators with polynomial coefficients, the
//! P-recursive recurrences they induce on Taylor coefficients, and exact
//! unrolling of holonomic sequences.

use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use crate::numcore::PolyQ;
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// `Σ_i p_i(z) (d/dz)^i`; entry `i` of `coeffs` is `p_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialOperator {
    coeffs: Vec<PolyQ>,
}

impl DifferentialOperator {
    pub fn new(mut coeffs: Vec<PolyQ>) -> Result<Self> {
        while coeffs.last().is_some_and(PolyQ::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::domain("differential operator is zero"));
        }
        Ok(DifferentialOperator { coeffs })
    }

    pub fn coeffs(&self) -> &[PolyQ] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(PolyQ::degree)
            .max()
            .unwrap_or(0)
    }

    /// Applies the operator to a truncated series. The result is known to
    /// order `f.order() - self.order()`.
    pub fn apply(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let out_order = f.order().saturating_sub(self.order());
        let mut acc = TruncatedSeries::zero(out_order);
        let mut deriv = f.clone();
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                deriv = deriv.derivative();
            }
            if !p.is_zero() {
                acc = acc.add(&deriv.mul_poly(p).truncate(out_order));
            }
        }
        acc
    }
}

/// `Σ_{j=0}^{r} q_j(n) P_{n+j} = 0` for all `n ≥ valid_from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRecurrence {
    coeffs: Vec<PolyQ>,
    valid_from: i64,
}

impl LinearRecurrence {
    /// A recurrence asserted for every `n ≥ 0`.
    pub fn new(coeffs: Vec<PolyQ>) -> Result<Self> {
        Self::with_start(coeffs, 0)
    }

    pub fn with_start(coeffs: Vec<PolyQ>, valid_from: i64) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::domain("recurrence order must be at least 1"));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::domain(
                "leading recurrence coefficient is the zero polynomial",
            ));
        }
        Ok(LinearRecurrence { coeffs, valid_from })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Entry `j` multiplies `P_{n+j}`.
    pub fn coeffs(&self) -> &[PolyQ] {
        &self.coeffs
    }

    pub fn valid_from(&self) -> i64 {
        self.valid_from
    }

    /// Canonical form: zero end coefficients dropped (with index shift),
    /// common polynomial factor and rational content removed, leading
    /// coefficient of `q_r` positive.
    ///
    /// Dividing out a polynomial factor `g` strengthens the relation at the
    /// integer roots of `g`, so `valid_from` moves past them.
    pub fn normalized(&self) -> LinearRecurrence {
        let mut coeffs = self.coeffs.clone();
        let mut valid_from = self.valid_from;
        while coeffs.last().is_some_and(PolyQ::is_zero) {
            coeffs.pop();
        }
        let low = coeffs.iter().position(|p| !p.is_zero()).unwrap_or(0);
        if low > 0 {
            let back = Rational::from(-(low as i64));
            coeffs = coeffs[low..].iter().map(|p| p.shift(&back)).collect();
            valid_from += low as i64;
        }
        let g = coeffs.iter().fold(PolyQ::zero(), |g, p| g.gcd(p));
        if g.degree().is_some_and(|d| d > 0) {
            if let Some(root) = largest_integer_root(&g) {
                valid_from = valid_from.max(root + 1);
            }
            coeffs = coeffs.iter().map(|p| p.div_rem(&g).0).collect();
        }
        let content = crate::numcore::poly::content_of(coeffs.iter().flat_map(|p| p.coeffs()));
        let lead_neg = coeffs
            .last()
            .and_then(PolyQ::leading)
            .is_some_and(|c| *c < 0);
        let s = if lead_neg {
            -content.recip()
        } else {
            content.recip()
        };
        coeffs = coeffs.iter().map(|p| p.scale(&s)).collect();
        LinearRecurrence { coeffs, valid_from }
    }

    /// The coefficient values `q_j(n)`.
    pub fn eval_at(&self, n: i64) -> Vec<Rational> {
        self.coeffs.iter().map(|p| p.eval_i64(n)).collect()
    }

    /// Same relation (coefficient polynomials), ignoring the validity start.
    pub fn same_relation(&self, other: &LinearRecurrence) -> bool {
        self.coeffs == other.coeffs
    }
}

impl fmt::Display for LinearRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, p) in self.coeffs.iter().enumerate().rev() {
            if j + 1 != self.coeffs.len() {
                write!(f, " + ")?;
            }
            write!(f, "({})P[n+{j}]", p.display_in("n"))?;
        }
        write!(f, " = 0  (n >= {})", self.valid_from)
    }
}

/// Largest integer root, found by scanning up to the Cauchy bound.
fn largest_integer_root(p: &PolyQ) -> Option<i64> {
    let lead = p.leading()?;
    let mut bound = Rational::from(0);
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = Rational::from(c / lead).abs();
        if r > bound {
            bound = r;
        }
    }
    let bound = bound.ceil().numer().to_i64().unwrap_or(i64::MAX / 2) + 1;
    (-bound..=bound).rev().find(|&n| p.eval_i64(n) == 0)
}

/// A recurrence together with its first `order` terms (indices `0..order`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomicSequence {
    recurrence: LinearRecurrence,
    initial: Vec<Rational>,
}

impl HolonomicSequence {
    pub fn new(recurrence: LinearRecurrence, initial: Vec<Rational>) -> Result<Self> {
        if initial.len() != recurrence.order() {
            return Err(Error::domain(format!(
                "need {} initial terms, got {}",
                recurrence.order(),
                initial.len()
            )));
        }
        if recurrence.valid_from() > 0 {
            return Err(Error::domain(format!(
                "recurrence only holds from n = {}; cannot unroll from index 0",
                recurrence.valid_from()
            )));
        }
        Ok(HolonomicSequence {
            recurrence,
            initial,
        })
    }

    pub fn recurrence(&self) -> &LinearRecurrence {
        &self.recurrence
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    /// Exact values `P_0 … P_{n_terms-1}`.
    pub fn unroll(&self, n_terms: usize) -> Result<Vec<Rational>> {
        let r = self.recurrence.order();
        let mut out: Vec<Rational> = self.initial.iter().take(n_terms).cloned().collect();
        let coeffs = self.recurrence.coeffs();
        let mut n = 0usize;
        while out.len() < n_terms {
            let ni = Rational::from(n as u64);
            let lead = coeffs[r].eval(&ni);
            if lead == 0 {
                return Err(Error::LeadingCoefficientVanishes(n as i64));
            }
            let mut acc = Rational::new();
            for (j, q) in coeffs[..r].iter().enumerate() {
                if !q.is_zero() && out[n + j] != 0 {
                    acc += q.eval(&ni) * &out[n + j];
                }
            }
            out.push(-acc / lead);
            n += 1;
        }
        Ok(out)
    }
}

/// Recurrence on the Taylor coefficients `c_n` of any power-series solution
/// of `op`, in normalized form.
///
/// The monomial `z^j` inside `p_i` contributes
/// `(m+s)(m+s-1)⋯(m+s-i+1) c_{m+s}` to the coefficient of `z^m`, where
/// `s = i - j`; shifting `n = m + min s` puts the lowest index at `c_n`.
pub fn ode_to_recurrence(op: &DifferentialOperator) -> Result<LinearRecurrence> {
    let mut by_shift: BTreeMap<i64, Vec<(usize, Rational)>> = BTreeMap::new();
    for (i, p) in op.coeffs().iter().enumerate() {
        for (j, c) in p.coeffs().iter().enumerate() {
            if *c != 0 {
                by_shift
                    .entry(i as i64 - j as i64)
                    .or_default()
                    .push((i, c.clone()));
            }
        }
    }
    let s_min = *by_shift.keys().next().expect("nonzero operator");
    let s_max = *by_shift.keys().next_back().unwrap();
    let mut coeffs = vec![PolyQ::zero(); (s_max - s_min + 1) as usize];
    for (s, terms) in &by_shift {
        let slot = &mut coeffs[(s - s_min) as usize];
        for (i, c) in terms {
            // falling factorial (n - s_min + s)^{(i)}
            let base = s - s_min;
            let mut ff = PolyQ::constant(c.clone());
            for t in 0..*i as i64 {
                ff = &ff * &PolyQ::linear(base - t);
            }
            *slot = &*slot + &ff;
        }
    }
    if coeffs.len() < 2 {
        return Err(Error::Degenerate(
            "operator induces a single-term relation (order-0 recurrence)".into(),
        ));
    }
    Ok(LinearRecurrence {
        coeffs,
        valid_from: s_min,
    }
    .normalized())
}

/// True iff `op f` vanishes to the checkable order.
pub fn check_series_satisfies(op: &DifferentialOperator, f: &TruncatedSeries) -> Result<bool> {
    let needed = op.order() + op.max_degree();
    if f.order() <= needed {
        return Err(Error::InsufficientOrder {
            needed,
            have: f.order(),
        });
    }
    Ok(op.apply(f).is_zero())
}
