//! Concrete approximation sequences, each reachable by more than one route,
//! and the estimators used to read off their limits and rates.

mod estimate;
mod euler;
mod gamma;
mod intseq;
mod pade;

use std::fmt;

use rug::{Float, Rational};

pub use estimate::{
    fit_growth, fit_growth_factorial, limit_estimate, limit_estimate_with, rate_exponent,
    GrowthModel, LimitEstimate, LimitMethod, LimitOptions,
};
pub use euler::{
    euler_generating_function, euler_operator, euler_recurrence, euler_seq, euler_values,
};
pub use gamma::{
    check_gamma_domain, gamma_generating_function, gamma_initial_terms, gamma_operator,
    gamma_recurrence, gamma_seq, gamma_values,
};
pub use intseq::{
    bessel_combination, eval_f_bessel, eval_g_bessel, intseq, intseq_constants,
    u_generating_function, v_generating_function, IntSeq, IntSeqConstants,
};
pub use pade::{
    cf_convergents, e_cf_quotients, e_convergent_index, e_convergents, pade_exp,
    pade_negated_reflection, pade_q_ratio, pade_remainder, PadePair,
};

use crate::par::Execution;
use crate::{Error, Result};

/// Route used to compute a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Finite closed-form sum per index.
    Closed,
    /// Unrolling the P-recursive recurrence from the seed values.
    Recurrence,
    /// Taylor coefficients of the generating function built by series
    /// composition.
    Series,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Closed, Method::Recurrence, Method::Series];

    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Recurrence => "recurrence",
            Method::Series => "series",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "recurrence" => Ok(Method::Recurrence),
            "series" => Ok(Method::Series),
            _ => Err(Error::domain(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunLabel {
    /// `P_n(α) → Γ(α)`
    Gamma { alpha: Rational },
    /// `P_n → γ`
    Euler,
}

impl fmt::Display for RunLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunLabel::Gamma { alpha } => write!(f, "gamma(alpha={alpha})"),
            RunLabel::Euler => write!(f, "euler"),
        }
    }
}

/// A computed sequence prefix together with its estimates.
#[derive(Clone, Debug)]
pub struct ApproximationRun {
    pub label: RunLabel,
    pub values: Vec<Rational>,
    /// `None` when there are too few values to estimate.
    pub limit: Option<LimitEstimate>,
    /// Growth of `|P_n - limit|` in the shape `q^n n^{-u-1} (log n)^v`.
    pub error_model: Option<GrowthModel>,
    pub method: Method,
    pub precision: u32,
}

impl ApproximationRun {
    fn build(label: RunLabel, values: Vec<Rational>, method: Method, prec: u32) -> Result<Self> {
        let limit = if values.len() >= estimate::MIN_LIMIT_VALUES {
            Some(limit_estimate(&values, prec)?)
        } else {
            None
        };
        let error_model = match &limit {
            Some(l) if values.len() >= estimate::MIN_FIT_VALUES && !l.degenerate => {
                let diffs: Vec<Float> = values
                    .iter()
                    .map(|v| Float::with_val(prec, v) - &l.limit)
                    .collect();
                fit_growth(&diffs).ok()
            }
            _ => None,
        };
        Ok(ApproximationRun {
            label,
            values,
            limit,
            error_model,
            method,
            precision: prec,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Computes the sequence by every method and checks exact agreement.
pub fn agree_all<F>(exec: Execution, compute: F) -> Result<Vec<Rational>>
where
    F: Fn(Method) -> Result<Vec<Rational>> + Sync + Send,
{
    let runs = crate::par::map_slice(exec, &Method::ALL, |&m| compute(m));
    let mut runs = runs.into_iter();
    let first = runs.next().unwrap()?;
    for (m, r) in Method::ALL.iter().skip(1).zip(runs) {
        let r = r?;
        if let Some(i) = first.iter().zip(&r).position(|(a, b)| a != b) {
            return Err(Error::Disagreement(format!(
                "{} and {m} differ at n = {i}",
                Method::ALL[0]
            )));
        }
        if r.len() != first.len() {
            return Err(Error::Disagreement(format!(
                "{m} returned {} values",
                r.len()
            )));
        }
    }
    Ok(first)
}
