//! Truncated divergent expansions of `E_α(-z)` and `E(-z)` at large real
//! `z`, their optimal truncation, and verification by direct summation.
//!
//! With `E_α(z) = Σ_{n≥0} z^n/(n!(n+α))` and `E(z) = Σ_{n≥1} z^n/(n!·n)`:
//!
//! * `E_α(-z) ≈ Γ(α) z^{-α} - e^{-z} Σ (-1)^n (1-α)_n z^{-n-1}`
//! * `E(-z) ≈ -γ - log z - e^{-z} Σ (-1)^n n! z^{-n-1}`

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::constructions::{rate_exponent, ApproximationRun};
use crate::gammalab::{euler_gamma, gamma_value};
use crate::numcore::{is_nonpositive_integer, pochhammer, rel_diff};
use crate::par::{self, Execution};
use crate::{Error, Result};

/// `coefficient · z^{-power} · (log z)^{log_power}`.
#[derive(Clone, Debug)]
pub struct FrontTerm {
    pub coefficient: Float,
    pub power: Rational,
    pub log_power: u32,
}

#[derive(Clone, Debug)]
pub struct AsymptoticSeries {
    pub front_terms: Vec<FrontTerm>,
    /// Exponent `ρ` of the `e^{ρz}` factor in front of the tail.
    pub exp_rho: Float,
    /// Overall sign of the exponential part (both instances carry `-1`).
    pub tail_scale: i32,
    /// Coefficients of `z^{-n-1}` under `e^{ρz}`.
    pub tail_coeffs: Vec<Rational>,
}

impl AsymptoticSeries {
    pub fn order(&self) -> usize {
        self.tail_coeffs.len()
    }

    /// `|tail_scale · e^{ρz} c_n z^{-n-1}|`.
    pub fn tail_term(&self, z: &Float, n: usize) -> Result<Float> {
        let c = self.tail_coeffs.get(n).ok_or(Error::InsufficientOrder {
            needed: n + 1,
            have: self.order(),
        })?;
        let p = z.prec();
        let e = Float::with_val(p, &self.exp_rho * z).exp();
        let zp = Float::with_val(p, z.pow(n as u32 + 1));
        Ok((Float::with_val(p, c) * e / zp).abs())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EKind {
    EAlpha(Rational),
    ELog,
}

pub fn asym_e_alpha(alpha: &Rational, order: usize, prec: u32) -> Result<AsymptoticSeries> {
    if is_nonpositive_integer(alpha) {
        return Err(Error::domain(format!(
            "E_alpha expansion needs alpha ∉ ℤ≤0, got {alpha}"
        )));
    }
    let one_minus = Rational::from(1) - alpha;
    let tail_coeffs = (0..order as u32)
        .map(|n| {
            let p = pochhammer(&one_minus, n);
            if n % 2 == 1 {
                -p
            } else {
                p
            }
        })
        .collect();
    Ok(AsymptoticSeries {
        front_terms: vec![FrontTerm {
            coefficient: gamma_value(alpha, prec)?,
            power: alpha.clone(),
            log_power: 0,
        }],
        exp_rho: Float::with_val(prec, -1),
        tail_scale: -1,
        tail_coeffs,
    })
}

pub fn asym_e_log(order: usize, prec: u32) -> Result<AsymptoticSeries> {
    let mut fact = Rational::from(1);
    let tail_coeffs = (0..order as u32)
        .map(|n| {
            if n > 0 {
                fact *= n;
            }
            if n % 2 == 1 {
                Rational::from(-&fact)
            } else {
                fact.clone()
            }
        })
        .collect();
    Ok(AsymptoticSeries {
        front_terms: vec![
            FrontTerm {
                coefficient: -euler_gamma(prec)?,
                power: Rational::new(),
                log_power: 0,
            },
            FrontTerm {
                coefficient: Float::with_val(prec, -1),
                power: Rational::new(),
                log_power: 1,
            },
        ],
        exp_rho: Float::with_val(prec, -1),
        tail_scale: -1,
        tail_coeffs,
    })
}

pub fn asym_for(kind: &EKind, order: usize, prec: u32) -> Result<AsymptoticSeries> {
    match kind {
        EKind::EAlpha(a) => asym_e_alpha(a, order, prec),
        EKind::ELog => asym_e_log(order, prec),
    }
}

/// Index of the smallest tail term of an `n!/z^{n+1}`-type series, `round(|z|)`.
pub fn optimal_truncation(z: &Float) -> usize {
    let r = Float::with_val(z.prec(), z.abs_ref()).round();
    r.to_u32_saturating().unwrap_or(0) as usize
}

/// [`optimal_truncation`] clamped to the series order.
pub fn optimal_truncation_for(a: &AsymptoticSeries, z: &Float) -> usize {
    optimal_truncation(z).min(a.order())
}

/// Front terms plus the first `n_terms` terms of the exponential tail, at
/// real `z > 0`.
pub fn eval_asym(a: &AsymptoticSeries, z: &Float, n_terms: usize, prec: u32) -> Result<Float> {
    if n_terms > a.order() {
        return Err(Error::InsufficientOrder {
            needed: n_terms,
            have: a.order(),
        });
    }
    if *z <= 0 {
        return Err(Error::domain(
            "expansions are evaluated on the positive real axis",
        ));
    }
    let wp = prec + 32;
    let zw = Float::with_val(wp, z);
    let lnz = Float::with_val(wp, zw.ln_ref());
    let mut acc = Float::new(wp);
    for t in &a.front_terms {
        let pw = Float::with_val(wp, -Float::with_val(wp, &t.power) * &lnz).exp();
        let lg = Float::with_val(wp, (&lnz).pow(t.log_power));
        acc += Float::with_val(wp, &t.coefficient * &pw) * lg;
    }
    let inv = Float::with_val(wp, zw.recip_ref());
    let mut pw = inv.clone();
    let mut tail = Float::new(wp);
    for c in &a.tail_coeffs[..n_terms] {
        tail += Float::with_val(wp, c * &pw);
        pw *= &inv;
    }
    let e = Float::with_val(wp, &a.exp_rho * &zw).exp();
    acc += tail * e * a.tail_scale;
    Ok(Float::with_val(prec, acc))
}

/// Precision needed to sum the alternating Taylor series at `-z`: terms
/// reach `e^{|z|}` while the result is of order one.
pub fn direct_budget(z: &Float, prec: u32) -> u32 {
    let bits = (z.to_f64().abs() * std::f64::consts::LOG2_E).ceil() as u32;
    prec + bits + 32
}

/// Taylor summation of `E_α(-z)` or `E(-z)` at the budgeted working
/// precision.
pub fn direct_e_eval(which: &EKind, z: &Float, prec: u32) -> Result<Float> {
    direct_e_eval_with(which, z, prec, direct_budget(z, prec))
}

/// As [`direct_e_eval`] with an explicit working precision. Fails when `wp`
/// is below the cancellation budget, or when the largest term exceeds the
/// result by more than `wp - prec` bits.
pub fn direct_e_eval_with(which: &EKind, z: &Float, prec: u32, wp: u32) -> Result<Float> {
    let need = direct_budget(z, prec);
    if wp < need {
        return Err(Error::precision(format!(
            "working precision {wp} below the cancellation budget {need}"
        )));
    }
    if let EKind::EAlpha(a) = which {
        if is_nonpositive_integer(a) {
            return Err(Error::domain("E_alpha needs alpha ∉ ℤ≤0"));
        }
    }
    let x = Float::with_val(wp, -Float::with_val(wp, z));
    let denom = |n: u32| -> Float {
        match which {
            EKind::EAlpha(a) => Float::with_val(wp, &Rational::from(a + n)),
            EKind::ELog => Float::with_val(wp, n),
        }
    };
    let start = if matches!(which, EKind::ELog) { 1 } else { 0 };
    // power = x^n / n!
    let mut power = Float::with_val(wp, 1);
    for n in 1..=start {
        power *= &x;
        power /= n;
    }
    let mut sum = Float::new(wp);
    let mut max_term = Float::new(wp);
    let zabs = z.to_f64().abs();
    let mut n = start;
    loop {
        let term = Float::with_val(wp, &power / &denom(n));
        let mag = Float::with_val(wp, term.abs_ref());
        if mag > max_term {
            max_term.clone_from(&mag);
        }
        sum += &term;
        if n as f64 > zabs && !sum.is_zero() {
            let bound = Float::with_val(wp, sum.abs_ref()) >> (wp as i32);
            if mag <= bound {
                break;
            }
        }
        n += 1;
        power *= &x;
        power /= n;
    }
    if !sum.is_zero() {
        let lost = Float::with_val(64, &max_term / &sum).abs().log2().to_f64();
        if lost > (wp - prec) as f64 {
            return Err(Error::precision(format!(
                "cancellation lost {lost:.0} bits, budget {}",
                wp - prec
            )));
        }
    }
    Ok(Float::with_val(prec, sum))
}

/// `|direct - eval_asym(N)|` relative to `|direct|` for `N = 0..=max_n`.
pub fn error_curve(
    which: &EKind,
    z: &Float,
    max_n: usize,
    prec: u32,
    exec: Execution,
) -> Result<Vec<Float>> {
    let series = asym_for(which, max_n, prec)?;
    let direct = direct_e_eval(which, z, prec)?;
    par::map_range(exec, max_n + 1, |n| {
        eval_asym(&series, z, n, prec).map(|v| rel_diff(&v, &direct))
    })
    .into_iter()
    .collect()
}

#[derive(Clone, Debug)]
pub struct AsymCheck {
    pub which: EKind,
    pub z: Float,
    pub truncation: usize,
    pub asymptotic: Float,
    pub direct: Float,
    pub rel_error: Float,
    pub pass: bool,
}

/// Optimal-truncation value against direct summation at relative tolerance
/// `tol`.
pub fn asym_check(which: &EKind, z: &Float, prec: u32, tol: f64) -> Result<AsymCheck> {
    let n = optimal_truncation(z);
    let series = asym_for(which, n, prec)?;
    let asymptotic = eval_asym(&series, z, n, prec)?;
    let direct = direct_e_eval(which, z, prec)?;
    let rel_error = rel_diff(&asymptotic, &direct);
    let pass = rel_error <= tol;
    Ok(AsymCheck {
        which: which.clone(),
        z: z.clone(),
        truncation: n,
        asymptotic,
        direct,
        rel_error,
        pass,
    })
}

#[derive(Clone, Debug)]
pub struct TransferReport {
    pub predicted: Rational,
    pub empirical: Option<f64>,
    pub window: (usize, usize),
    pub tolerance: f64,
    pub pass: bool,
}

pub const TRANSFER_WINDOW: (usize, usize) = (100, 1000);
pub const TRANSFER_TOLERANCE: f64 = 0.15;

/// Empirical rate exponent of `run` against a trusted limit, compared with
/// `predicted` at ±0.15 over `n ∈ [100, 1000]`.
pub fn transfer_rate_check(
    run: &ApproximationRun,
    predicted: &Rational,
    trusted_limit: &Float,
) -> Result<TransferReport> {
    if run.len() < 200 {
        return Err(Error::InsufficientOrder {
            needed: 200,
            have: run.len(),
        });
    }
    let prec = trusted_limit.prec().max(run.precision);
    let xs: Vec<Float> = run
        .values
        .iter()
        .map(|v| Float::with_val(prec, v))
        .collect();
    let window = (TRANSFER_WINDOW.0, TRANSFER_WINDOW.1.min(run.len()));
    let empirical = rate_exponent(&xs, trusted_limit, window);
    let pass = empirical.is_some_and(|e| (e - predicted.to_f64()).abs() <= TRANSFER_TOLERANCE);
    Ok(TransferReport {
        predicted: predicted.clone(),
        empirical,
        window,
        tolerance: TRANSFER_TOLERANCE,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    use rug::float::Constant;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    #[test]
    fn coefficients() {
        let a = asym_e_alpha(&q(1, 2), 5, 128).unwrap();
        assert_eq!(a.tail_coeffs[0], 1);
        assert_eq!(a.tail_coeffs[2], q(3, 4));
        let sqrt_pi = pi(128).sqrt();
        assert!(rel_diff(&a.front_terms[0].coefficient, &sqrt_pi) < 1e-35);
        let l = asym_e_log(5, 128).unwrap();
        assert_eq!(l.tail_coeffs[3], -6);
        assert_eq!(l.front_terms[1].coefficient, -1);
        assert_eq!(l.front_terms[1].log_power, 1);
        assert!(asym_e_alpha(&q(-2, 1), 5, 64).is_err());
    }

    #[test]
    fn truncation_index() {
        assert_eq!(optimal_truncation(&Float::with_val(64, 30)), 30);
        assert_eq!(optimal_truncation(&Float::with_val(64, 5.4)), 5);
        let mut last = 0;
        for i in 0..100 {
            let n = optimal_truncation(&Float::with_val(64, 2.0 + i as f64 * 0.37));
            assert!(n >= last);
            last = n;
        }
        let a = asym_e_log(10, 64).unwrap();
        assert_eq!(optimal_truncation_for(&a, &Float::with_val(64, 30)), 10);
    }

    #[test]
    fn front_only_at_zero_terms() {
        let a = asym_e_alpha(&q(1, 2), 3, 128).unwrap();
        let z = Float::with_val(128, 4);
        let v = eval_asym(&a, &z, 0, 128).unwrap();
        let expect = pi(128).sqrt() / 2u32;
        assert!(rel_diff(&v, &expect) < 1e-35);
        assert!(eval_asym(&a, &z, 4, 128).is_err());
    }

    #[test]
    fn direct_summation() {
        let z0 = Float::with_val(64, 1e-30);
        assert!(direct_e_eval(&EKind::ELog, &z0, 64).unwrap().abs() < 1e-29);
        let z = Float::with_val(512, 30);
        let v = direct_e_eval(&EKind::EAlpha(q(1, 2)), &z, 512).unwrap();
        let front = pi(512).sqrt() / Float::with_val(512, 30).sqrt();
        assert!(rel_diff(&v, &front) < 1e-12);
        assert!(rel_diff(&v, &front) > 1e-20);
        let hi = direct_e_eval(&EKind::EAlpha(q(1, 2)), &Float::with_val(1024, 30), 1024).unwrap();
        assert!(rel_diff(&v, &hi) < Float::with_val(64, Float::i_exp(1, -500)));
        assert!(matches!(
            direct_e_eval_with(&EKind::ELog, &z, 512, 520),
            Err(Error::Precision(_))
        ));
    }

    #[test]
    fn optimal_truncation_agrees_at_thirty() {
        for which in [EKind::EAlpha(q(1, 2)), EKind::ELog] {
            let r = asym_check(&which, &Float::with_val(512, 30), 512, 1e-15).unwrap();
            assert_eq!(r.truncation, 30);
            assert!(r.pass, "{which:?}: {}", r.rel_error);
        }
    }

    #[test]
    fn remainder_bounded_by_next_term() {
        for which in [EKind::EAlpha(q(1, 2)), EKind::EAlpha(q(1, 3)), EKind::ELog] {
            for zi in [10u32, 20, 30] {
                let z = Float::with_val(256, zi);
                let n_star = optimal_truncation(&z);
                let a = asym_for(&which, n_star + 1, 256).unwrap();
                let direct = direct_e_eval(&which, &z, 256).unwrap();
                for n in 0..=n_star {
                    let approx = eval_asym(&a, &z, n, 256).unwrap();
                    let rem = Float::with_val(256, &direct - &approx).abs();
                    let bound = a.tail_term(&z, n).unwrap() * 2u32;
                    assert!(rem <= bound, "{which:?} z={zi} N={n}");
                }
            }
        }
    }

    #[test]
    fn error_curve_shape_at_ten() {
        for which in [EKind::EAlpha(q(1, 2)), EKind::ELog] {
            let z = Float::with_val(256, 10);
            let curve = error_curve(&which, &z, 20, 256, Execution::default()).unwrap();
            let n_star = optimal_truncation(&z);
            for n in 0..n_star {
                assert!(curve[n + 1] < curve[n], "{which:?} decreasing at {n}");
            }
            for n in n_star + 2..20 {
                assert!(curve[n + 1] > curve[n], "{which:?} increasing at {n}");
            }
        }
    }
}
