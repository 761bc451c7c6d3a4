use rug::{Float, Rational};

use super::jet::{psi_and_polygammas, recip_gamma_jet};
use crate::numcore::{binomial, floor_i64, frac};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// Taylor coefficient `[h^i]` of `Γ(1-{y})/Γ(-y-n)` at `y = α + h`, with the
/// integer part of `y` frozen at `⌊α⌋` (right derivatives at integers).
fn kernel_coeff(alpha: &Rational, n: i64, i: usize) -> Result<Rational> {
    let fl = floor_i64(alpha);
    let len = i + 1;
    // factor -α - h + c as a series in h
    let factor = |c: i64| {
        let mut v = vec![Rational::new(); len];
        v[0] = Rational::from(c) - alpha;
        if len > 1 {
            v[1] = Rational::from(-1);
        }
        TruncatedSeries::new(v)
    };
    let mut acc = TruncatedSeries::one(len);
    if n >= -fl {
        // (-y-n)_{n+⌊α⌋+1}
        for j in 0..(n + fl + 1) {
            acc = acc.mul(&factor(j - n));
        }
    } else {
        // 1 / (-y+⌊α⌋+1)_{-n-⌊α⌋-1}
        let mut den = TruncatedSeries::one(len);
        for j in 0..(-n - fl - 1) {
            den = den.mul(&factor(fl + 1 + j));
        }
        acc = acc.div(&den)?;
    }
    Ok(acc.coeff(i).clone())
}

/// `Σ_n (1/i!) ∂_y^i [Γ(1-{y})/Γ(-y-n)]_{y=α} z^n` to order `n_terms`,
/// with exact rational coefficients.
pub fn y_alpha_i(alpha: &Rational, i: usize, n_terms: usize) -> Result<TruncatedSeries> {
    let coeffs = (0..n_terms as i64)
        .map(|n| kernel_coeff(alpha, n, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries::new(coeffs))
}

/// Coefficients `c_ν` of `λ_{t,s} = Σ_ν c_ν L^ν` in the symbol `L = log(1/x)`:
/// `c_ν = (-1)^{s-ν} (1/Γ)^{(s-ν)}(1-{t}) / ((s-ν)! ν!)`.
pub fn lambda_ts_log_poly(t: &Rational, s: usize, prec: u32) -> Result<Vec<Float>> {
    let point = Rational::from(1) - frac(t);
    let jet = recip_gamma_jet(&point, s + 1, prec + 16)?;
    let mut nu_fact = Float::with_val(prec, 1);
    let mut out = Vec::with_capacity(s + 1);
    for nu in 0..=s {
        if nu > 0 {
            nu_fact *= nu as u32;
        }
        // jet coefficient already carries 1/(s-ν)!
        let mut c = Float::with_val(prec, &jet.coeffs()[s - nu] / &nu_fact);
        if (s - nu) % 2 == 1 {
            c = -c;
        }
        out.push(c);
    }
    Ok(out)
}

/// `λ_{t,s}(1/x)` for real `x > 0`.
pub fn lambda_ts(t: &Rational, s: usize, x: &Float, prec: u32) -> Result<Float> {
    if *x <= 0 {
        return Err(Error::domain("λ needs x > 0 on the real branch"));
    }
    let poly = lambda_ts_log_poly(t, s, prec)?;
    let l = Float::with_val(prec + 16, x.recip_ref()).ln();
    let mut acc = Float::new(prec + 16);
    for c in poly.iter().rev() {
        acc = acc * &l + c;
    }
    Ok(Float::with_val(prec, acc))
}

/// `Γ^{(k)}(s)/Γ(s)` for `k ≤ n` as polynomials in `γ`: `ψ(s)` enters as
/// `(ψ(s)+γ) - γ`, higher polygammas as constants. Entry `k` lists the
/// coefficients of `γ^0, γ^1, …`.
pub fn derivative_ratio_in_gamma(n: usize, s: &Rational, prec: u32) -> Result<Vec<Vec<Float>>> {
    let g = super::special::euler_gamma(prec + 16)?;
    let psis = psi_and_polygammas(s, n.max(1), prec + 16)?;
    let psi_poly: Vec<Vec<Float>> = psis
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i == 0 {
                vec![
                    Float::with_val(prec + 16, v + &g),
                    Float::with_val(prec + 16, -1),
                ]
            } else {
                vec![v.clone()]
            }
        })
        .collect();
    let mul = |a: &[Float], b: &[Float]| {
        let mut out = vec![Float::new(prec + 16); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += Float::with_val(prec + 16, x * y);
            }
        }
        out
    };
    let mut ratios: Vec<Vec<Float>> = vec![vec![Float::with_val(prec + 16, 1)]];
    for j in 0..n {
        let mut acc: Vec<Float> = Vec::new();
        for i in 0..=j {
            let term = mul(&psi_poly[i], &ratios[j - i]);
            let c = binomial(j as u32, i as u32);
            if acc.len() < term.len() {
                acc.resize(term.len(), Float::new(prec + 16));
            }
            for (a, t) in acc.iter_mut().zip(term) {
                *a += t * &c;
            }
        }
        ratios.push(acc);
    }
    Ok(ratios
        .into_iter()
        .map(|r| r.into_iter().map(|c| Float::with_val(prec, c)).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammalab::{gamma_deriv, gamma_float};
    use crate::numcore::{within_rel, PolyQ};
    use rug::float::Constant;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn integer_kernels_vanish_or_are_polynomials() {
        for t in 0..4 {
            assert!(y_alpha_i(&q(t, 1), 0, 12).unwrap().is_zero(), "t = {t}");
        }
        for t in [-1i64, -2, -3] {
            let y = y_alpha_i(&q(t, 1), 0, 12).unwrap();
            let deg = y.coeffs().iter().rposition(|c| *c != 0).unwrap();
            assert_eq!(deg as i64, -1 - t, "t = {t}");
        }
        // t = -2: 1 + z
        assert_eq!(
            &y_alpha_i(&q(-2, 1), 0, 4).unwrap().coeffs()[..3],
            &[q(1, 1), q(1, 1), q(0, 1)]
        );
    }

    #[test]
    fn fractional_kernel_is_rational_and_nontrivial() {
        let y = y_alpha_i(&q(1, 3), 2, 10).unwrap();
        assert_eq!(y.order(), 10);
        // n = 0 is linear in y, so only later coefficients carry an h² part
        assert_eq!(y.coeffs()[0], 0);
        assert!(y.coeffs()[1..].iter().all(|c| *c != 0));
    }

    /// `Γ(1-{y})/Γ(-y-n)` near α with the floor frozen, by MPFR-free
    /// evaluation through [`gamma_float`].
    fn kernel_numeric(alpha: &Rational, n: i64, y: &Float) -> Float {
        let fl = floor_i64(alpha);
        let p = y.prec();
        let num = gamma_float(&Float::with_val(p, -(y.clone()) + (fl + 1))).unwrap();
        let den = gamma_float(&Float::with_val(p, -(y.clone()) - n)).unwrap();
        num / den
    }

    #[test]
    fn kernel_matches_numerical_differentiation() {
        // Lagrange weights on nodes α + jh, j = -4..=4, exact over ℚ.
        let p = 512;
        let h = q(1, 1 << 20);
        let nodes: Vec<Rational> = (-4i64..=4).map(|j| Rational::from(&h * j)).collect();
        for alpha in [q(1, 3), q(-5, 2)] {
            for n in 0..=5i64 {
                let vals: Vec<Float> = nodes
                    .iter()
                    .map(|d| {
                        kernel_numeric(&alpha, n, &Float::with_val(p, &Rational::from(&alpha + d)))
                    })
                    .collect();
                for i in 0..=3usize {
                    // [h^i] of the interpolant = Σ_j w_{ij} f_j
                    let mut est = Float::new(p);
                    for (j, node) in nodes.iter().enumerate() {
                        let mut basis = PolyQ::constant(Rational::from(1));
                        for (k, other) in nodes.iter().enumerate() {
                            if k != j {
                                let lin = PolyQ::linear(Rational::from(-other));
                                basis = basis
                                    * lin
                                        .scale(&(Rational::from(1) / Rational::from(node - other)));
                            }
                        }
                        est += Float::with_val(p, &vals[j] * &Float::with_val(p, &basis.coeff(i)));
                    }
                    let exact = Float::with_val(p, &kernel_coeff(&alpha, n, i).unwrap());
                    let diff = Float::with_val(p, &est - &exact).abs().to_f64();
                    let scale = exact.to_f64().abs().max(1.0);
                    assert!(diff / scale < 1e-20, "α={alpha} n={n} i={i}: {diff}");
                }
            }
        }
    }

    #[test]
    fn lambda_special_cases() {
        let p = 256;
        let g = Float::with_val(p, Constant::Euler);
        for t in [q(0, 1), q(3, 1), q(-2, 1)] {
            for x in [q(1, 7), q(2, 1), q(35, 3)] {
                let xf = Float::with_val(p, &x);
                let expect = Float::with_val(p, xf.recip_ref()).ln() - &g;
                assert!(within_rel(
                    &lambda_ts(&t, 1, &xf, p).unwrap(),
                    &expect,
                    1e-60
                ));
            }
        }
        let inv_sqrt_pi = Float::with_val(p, Constant::Pi).sqrt().recip();
        for x in [0.5, 4.0] {
            let v = lambda_ts(&q(1, 2), 0, &Float::with_val(p, x), p).unwrap();
            assert!(within_rel(&v, &inv_sqrt_pi, 1e-60));
        }
        assert!(lambda_ts(&q(1, 2), 1, &Float::with_val(p, -1), p).is_err());
        let poly = lambda_ts_log_poly(&q(5, 1), 1, p).unwrap();
        assert!(within_rel(&poly[0], &Float::with_val(p, -&g), 1e-60));
        assert!(within_rel(&poly[1], &Float::with_val(p, 1), 1e-60));
    }

    #[test]
    fn gamma_polynomial_structure() {
        let p = 256;
        let g = Float::with_val(p, Constant::Euler);
        for s in [q(1, 1), q(1, 2), q(2, 3)] {
            let polys = derivative_ratio_in_gamma(3, &s, p).unwrap();
            let d = gamma_deriv(3, &s, p).unwrap();
            for (k, poly) in polys.iter().enumerate() {
                assert_eq!(poly.len(), k + 1);
                let lead = if k % 2 == 0 { 1 } else { -1 };
                assert!(within_rel(
                    poly.last().unwrap(),
                    &Float::with_val(p, lead),
                    1e-60
                ));
                let mut v = Float::new(p);
                for c in poly.iter().rev() {
                    v = v * &g + c;
                }
                let ratio = Float::with_val(p, &d.values[k] / &d.values[0]);
                assert!(within_rel(&v, &ratio, 1e-50), "s={s} k={k}");
            }
        }
    }
}
