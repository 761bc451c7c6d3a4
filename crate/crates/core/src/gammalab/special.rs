use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::bernoulli::{bernoulli_even, TABLE};
use crate::numcore::{as_integer, double_run, is_nonpositive_integer};
use crate::{Error, Result};

const GUARD: u32 = 64;

fn pole_check(x: &Rational) -> Result<()> {
    if is_nonpositive_integer(x) {
        Err(Error::Pole(as_integer(x).unwrap_or_default()))
    } else {
        Ok(())
    }
}

/// Asymptotic threshold: the smallest tail term is about `e^{-2πx}`, but the
/// number of Bernoulli terms needed also grows with `wp`, so large
/// precisions shift further to stay inside the table.
fn shift_target(wp: u32) -> u64 {
    let wp = wp as u64;
    if wp <= 1200 {
        wp * 3 / 10 + 8
    } else {
        wp
    }
}

/// Smallest shift `m ≥ 0` with `x + m` beyond the asymptotic threshold for
/// working precision `wp`, derivative order `n`.
fn shift_for(x: &Rational, wp: u32, n: u32) -> u32 {
    let target = Rational::from((shift_target(wp) + 2 * n as u64, 1));
    if *x >= target {
        0
    } else {
        let d = Rational::from(&target - x);
        let (_, ceil) = d.fract_ceil(Integer::new());
        ceil.to_u32().unwrap_or(u32::MAX)
    }
}

/// `Σ_{k≥1} B_{2k} w_k / x^{2k+e}` until terms drop below `2^{-wp}` relative
/// to `scale`; `w_k` is supplied as an exact rational.
fn bernoulli_tail<W>(x: &Float, e: u32, wp: u32, scale: &Float, weight: W) -> Result<Float>
where
    W: Fn(u32) -> Rational,
{
    let inv_x2 = Float::with_val(wp, x.square_ref()).recip();
    let mut pw = Float::with_val(wp, x.pow(e)).recip() * &inv_x2;
    let tol = Float::with_val(wp, scale.abs_ref()) >> (wp as i32);
    let mut sum = Float::new(wp);
    let mut last = Float::with_val(wp, f64::INFINITY);
    for k in 1..TABLE {
        let b = bernoulli_even(k).expect("within table");
        let c = Rational::from(b * &weight(k as u32));
        let term = Float::with_val(wp, &c * &pw);
        let mag = Float::with_val(wp, term.abs_ref());
        if mag > last {
            break;
        }
        sum += &term;
        if mag <= tol {
            return Ok(sum);
        }
        last = mag;
        pw *= &inv_x2;
    }
    Err(Error::precision(format!(
        "asymptotic tail did not reach 2^-{wp} at x = {}",
        x.to_f64()
    )))
}

fn shifted(x: &Rational, m: u32, wp: u32) -> Float {
    Float::with_val(wp, &Rational::from(x + m))
}

/// `ψ(x)` at large `x`: `ln x - 1/(2x) - Σ B_{2k}/(2k x^{2k})`.
fn psi_asymptotic(x: &Float, wp: u32) -> Result<Float> {
    let lead = Float::with_val(wp, x.ln_ref());
    let half = Float::with_val(wp, x * 2u32).recip();
    let tail = bernoulli_tail(x, 0, wp, &lead, |k| Rational::from((1, 2 * k)))?;
    Ok(lead - half - tail)
}

/// Euler's constant from `γ = H_{m-1} - ψ(m)` with the asymptotic `ψ(m)`.
pub fn euler_gamma(prec: u32) -> Result<Float> {
    double_run(prec, GUARD / 2, |p| {
        let wp = p + GUARD;
        let m = shift_for(&Rational::new(), wp, 0).max(2);
        let mut h = Float::new(wp);
        for j in 1..m {
            h += Float::with_val(wp, j).recip();
        }
        let psi_m = psi_asymptotic(&Float::with_val(wp, m), wp)?;
        Ok(Float::with_val(p, h - psi_m))
    })
}

/// Digamma by `ψ(x) = ψ(x+m) - Σ_{j<m} 1/(x+j)`.
pub fn psi(x: &Rational, prec: u32) -> Result<Float> {
    pole_check(x)?;
    let wp = prec + GUARD;
    let m = shift_for(x, wp, 0);
    let mut acc = psi_asymptotic(&shifted(x, m, wp), wp)?;
    for j in 0..m {
        acc -= Float::with_val(wp, &Rational::from(x + j)).recip();
    }
    Ok(Float::with_val(prec, acc))
}

/// `ψ^{(n)}(x)` for `n ≥ 1` by
/// `ψ^{(n)}(x) = ψ^{(n)}(x+m) - (-1)^n n! Σ_{j<m} (x+j)^{-n-1}`.
pub fn polygamma(n: u32, x: &Rational, prec: u32) -> Result<Float> {
    if n == 0 {
        return psi(x, prec);
    }
    pole_check(x)?;
    let wp = prec + GUARD + n;
    let m = shift_for(x, wp, n);
    let xs = shifted(x, m, wp);
    let fact = |k: u32| Float::with_val(wp, Float::factorial(k));
    // (n-1)!/x^n + n!/(2 x^{n+1}) + Σ B_{2k} (2k+n-1)!/((2k)! x^{2k+n})
    let lead = fact(n - 1) / Float::with_val(wp, (&xs).pow(n));
    let second = fact(n) / (Float::with_val(wp, (&xs).pow(n + 1)) * 2u32);
    let tail = bernoulli_tail(&xs, n, wp, &lead, |k| {
        // (2k+n-1)! / (2k)! = (2k+1)(2k+2)…(2k+n-1)
        let mut w = Integer::from(1);
        for j in 1..n {
            w *= 2 * k + j;
        }
        Rational::from(w)
    })?;
    let mut at_shift = lead + second + tail;
    if n.is_multiple_of(2) {
        at_shift = -at_shift;
    }
    let mut sum = Float::new(wp);
    for j in 0..m {
        let base = Float::with_val(wp, &Rational::from(x + j));
        sum += Float::with_val(wp, (&base).pow(n + 1)).recip();
    }
    sum *= fact(n);
    if n % 2 == 1 {
        sum = -sum;
    }
    Ok(Float::with_val(prec, at_shift - sum))
}

/// `ln Γ(x)` for real `x` large enough that no shift is needed beyond the
/// internal one; `x > 0`.
fn ln_gamma_asymptotic(x: &Float, wp: u32) -> Result<Float> {
    let lnx = Float::with_val(wp, x.ln_ref());
    let half = Float::with_val(wp, 0.5);
    let main = Float::with_val(wp, x - &half) * &lnx - x;
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let c = two_pi.ln() * &half;
    let lead = Float::with_val(wp, &main + &c);
    let tail = bernoulli_tail(x, 0, wp, &lead, |k| {
        Rational::from((1, 2 * k * (2 * k - 1)))
    })?;
    // tail was scaled by 1/x^{2k}; the series needs 1/x^{2k-1}
    Ok(lead + tail * x)
}

/// `Γ(x)` for rational `x ∉ ℤ_{≤0}`: `Γ(x+m)` from Stirling's series divided by
/// the exact product `x(x+1)…(x+m-1)`; verified by a double run.
pub fn gamma_value(x: &Rational, prec: u32) -> Result<Float> {
    pole_check(x)?;
    double_run(prec, GUARD / 2, |p| {
        let wp = p + GUARD;
        let m = shift_for(x, wp, 0);
        let big = ln_gamma_asymptotic(&shifted(x, m, wp), wp)?.exp();
        let mut prod = Rational::from(1);
        for j in 0..m {
            prod *= Rational::from(x + j);
        }
        Ok(Float::with_val(p, big / Float::with_val(wp, &prod)))
    })
}

/// `Γ(x)` for a real `x`, without the double-run check. Used where the
/// argument is itself a computed real (numerical differentiation, grids).
pub fn gamma_float(x: &Float) -> Result<Float> {
    let prec = x.prec();
    if x.is_integer() && *x <= 0 {
        return Err(Error::Pole(x.to_f64() as i64));
    }
    let wp = prec + GUARD;
    let target = shift_target(wp) as f64;
    let xf = x.to_f64();
    let m = if xf >= target {
        0
    } else {
        (target - xf).ceil() as u32
    };
    let xw = Float::with_val(wp, x);
    let big = ln_gamma_asymptotic(&Float::with_val(wp, &xw + m), wp)?.exp();
    let mut prod = Float::with_val(wp, 1);
    for j in 0..m {
        prod *= Float::with_val(wp, &xw + j);
    }
    Ok(Float::with_val(prec, big / prod))
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_float(x: &Float) -> Result<Float> {
    if *x <= 0 {
        return Err(Error::domain("ln Γ needs a positive argument"));
    }
    let prec = x.prec();
    let wp = prec + GUARD;
    let target = shift_target(wp) as f64;
    let xf = x.to_f64();
    let m = if xf >= target {
        0
    } else {
        (target - xf).ceil() as u32
    };
    let xw = Float::with_val(wp, x);
    let mut val = ln_gamma_asymptotic(&Float::with_val(wp, &xw + m), wp)?;
    for j in 0..m {
        val -= Float::with_val(wp, &xw + j).ln();
    }
    Ok(Float::with_val(prec, val))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::within_rel;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn tol(prec: u32) -> f64 {
        2f64.powi(-(prec as i32 - 8))
    }

    #[test]
    fn euler_gamma_matches_mpfr() {
        for prec in [64, 256, 1024] {
            let g = euler_gamma(prec).unwrap();
            let oracle = Float::with_val(prec, Constant::Euler);
            assert!(within_rel(&g, &oracle, tol(prec)), "prec {prec}");
        }
        assert!(euler_gamma(64)
            .unwrap()
            .to_string_radix(10, Some(15))
            .starts_with("5.7721566490153"));
    }

    #[test]
    fn psi_values() {
        let p = 256;
        let g = Float::with_val(p, Constant::Euler);
        assert!(within_rel(
            &psi(&q(1, 1), p).unwrap(),
            &Float::with_val(p, -&g),
            tol(p)
        ));
        let ln2 = Float::with_val(p, Constant::Log2);
        let half = Float::with_val(p, -&g) - ln2 * 2u32;
        assert!(within_rel(&psi(&q(1, 2), p).unwrap(), &half, tol(p)));
        let d = psi(&q(2, 1), p).unwrap() - psi(&q(1, 1), p).unwrap();
        assert!(within_rel(&d, &Float::with_val(p, 1), tol(p)));
        for x in [q(1, 3), q(-7, 2), q(40, 3), q(1000, 7)] {
            let oracle = Float::with_val(p, &x).digamma();
            assert!(
                within_rel(&psi(&x, p).unwrap(), &oracle, tol(p - 16)),
                "{x}"
            );
        }
    }

    #[test]
    fn psi_matches_defining_series_at_low_precision() {
        // -γ + Σ_{k<K} (1/(k+1) - 1/(k+x)) with the K^{-1} tail term
        let x = q(1, 3);
        let p = 64;
        let k_max = 200_000u32;
        let xf = Float::with_val(p, &x);
        let mut s = -Float::with_val(p, Constant::Euler);
        for k in 0..k_max {
            s += Float::with_val(p, k + 1).recip() - Float::with_val(p, &xf + k).recip();
        }
        s += Float::with_val(p, &xf - 1u32) / k_max;
        assert!((s.to_f64() - psi(&x, p).unwrap().to_f64()).abs() < 1e-9);
    }

    #[test]
    fn poles() {
        assert!(matches!(psi(&q(0, 1), 64), Err(Error::Pole(0))));
        assert!(matches!(polygamma(2, &q(-3, 1), 64), Err(Error::Pole(-3))));
        assert!(matches!(gamma_value(&q(-1, 1), 64), Err(Error::Pole(-1))));
    }

    #[test]
    fn polygamma_values() {
        let p = 256;
        let z2 = Float::with_val(p, Float::zeta_u(2));
        let z3 = Float::with_val(p, Float::zeta_u(3));
        assert!(within_rel(&polygamma(1, &q(1, 1), p).unwrap(), &z2, tol(p)));
        assert!(within_rel(
            &polygamma(2, &q(1, 1), p).unwrap(),
            &Float::with_val(p, -z3 * 2u32),
            tol(p)
        ));
        // ψ'(1/2) = π²/2
        let pi2 = Float::with_val(p, Constant::Pi).square() / 2u32;
        assert!(within_rel(
            &polygamma(1, &q(1, 2), p).unwrap(),
            &pi2,
            tol(p)
        ));
        for x in [q(1, 3), q(1, 2), q(2, 1)] {
            assert!(polygamma(1, &x, 64).unwrap() > 0);
        }
        // ψ^{(4)}(1) = -4! ζ(5)·(-1)^{5} … = 24 ζ(5)·(-1)^{4+1}·(-1)
        let z5 = Float::with_val(p, Float::zeta_u(5));
        assert!(within_rel(
            &polygamma(4, &q(1, 1), p).unwrap(),
            &Float::with_val(p, -z5 * 24u32),
            tol(p)
        ));
    }

    #[test]
    fn gamma_values() {
        let p = 256;
        assert!(within_rel(
            &gamma_value(&q(1, 1), p).unwrap(),
            &Float::with_val(p, 1),
            tol(p)
        ));
        assert!(within_rel(
            &gamma_value(&q(5, 1), p).unwrap(),
            &Float::with_val(p, 24),
            tol(p)
        ));
        let sqrt_pi = Float::with_val(p, Constant::Pi).sqrt();
        assert!(within_rel(
            &gamma_value(&q(1, 2), p).unwrap(),
            &sqrt_pi,
            tol(p)
        ));
        let m2 = Float::with_val(p, &sqrt_pi * -2i32);
        assert!(within_rel(&gamma_value(&q(-1, 2), p).unwrap(), &m2, tol(p)));
        assert!(gamma_value(&q(1, 2), 64)
            .unwrap()
            .to_string_radix(10, Some(17))
            .starts_with("1.772453850905516"));
        for x in [q(1, 3), q(-17, 5), q(301, 4)] {
            let oracle = Float::with_val(p, &x).gamma();
            assert!(
                within_rel(&gamma_value(&x, p).unwrap(), &oracle, tol(p - 8)),
                "{x}"
            );
            assert!(
                within_rel(
                    &gamma_float(&Float::with_val(p, &x)).unwrap(),
                    &oracle,
                    tol(p - 8)
                ),
                "{x}"
            );
        }
        let lg = ln_gamma_float(&Float::with_val(p, 7.25)).unwrap();
        assert!(within_rel(
            &lg,
            &Float::with_val(p, 7.25).ln_gamma(),
            tol(p - 8)
        ));
    }

    #[test]
    fn reflection() {
        let p = 256;
        let pi = Float::with_val(p, Constant::Pi);
        for x in [q(1, 3), q(1, 4), q(2, 5)] {
            let g =
                gamma_value(&x, p).unwrap() * gamma_value(&(Rational::from(1) - &x), p).unwrap();
            let s = Float::with_val(p, &pi * &Float::with_val(p, &x)).sin();
            let one = g * s / &pi;
            assert!(within_rel(&one, &Float::with_val(p, 1), tol(p - 8)), "{x}");
        }
    }

    #[test]
    fn high_precision() {
        let p = 1536;
        let oracle = Float::with_val(p, &q(1, 3)).gamma();
        assert!(within_rel(
            &gamma_value(&q(1, 3), p).unwrap(),
            &oracle,
            tol(p - 8)
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn psi_recurrence(num in 1i64..500, den in 1i64..100) {
            let x = q(num, den);
            prop_assume!(x < 5);
            let p = 192;
            let lhs = psi(&(Rational::from(&x + 1)), p).unwrap() - psi(&x, p).unwrap();
            let rhs = Float::with_val(p, &x).recip();
            prop_assert!(within_rel(&lhs, &rhs, tol(p - 16)));
        }
    }
}
