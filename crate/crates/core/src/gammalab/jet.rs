use rug::{Float, Rational};

use super::special::{gamma_value, polygamma, psi};
use crate::numcore::{as_integer, binomial, is_nonpositive_integer};
use crate::{Error, Result};

/// Truncated Taylor expansion `Σ c_k h^k` with real coefficients
/// (`c_k = f^{(k)}(x)/k!`).
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    coeffs: Vec<Float>,
}

impl Jet {
    pub fn new(coeffs: Vec<Float>) -> Self {
        Jet { coeffs }
    }

    /// From derivative values `f(x), f'(x), …`.
    pub fn from_derivatives(values: &[Float]) -> Self {
        let mut fact = Float::with_val(values.first().map_or(64, Float::prec), 1);
        let coeffs = values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if k > 0 {
                    fact *= k as u32;
                }
                Float::with_val(v.prec(), v / &fact)
            })
            .collect();
        Jet { coeffs }
    }

    /// `h ↦ c + h` truncated to `len` coefficients.
    pub fn linear(c: &Rational, len: usize, prec: u32) -> Self {
        let mut coeffs = vec![Float::new(prec); len];
        if len > 0 {
            coeffs[0] = Float::with_val(prec, c);
        }
        if len > 1 {
            coeffs[1] = Float::with_val(prec, 1);
        }
        Jet { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    fn prec(&self) -> u32 {
        self.coeffs.iter().map(Float::prec).max().unwrap_or(64)
    }

    pub fn to_derivatives(&self) -> Vec<Float> {
        let mut fact = Float::with_val(self.prec(), 1);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as u32;
                }
                Float::with_val(c.prec(), c * &fact)
            })
            .collect()
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let len = self.len().min(other.len());
        let prec = self.prec().max(other.prec());
        let coeffs = (0..len)
            .map(|k| {
                let mut acc = Float::new(prec);
                for j in 0..=k {
                    acc += Float::with_val(prec, &self.coeffs[j] * &other.coeffs[k - j]);
                }
                acc
            })
            .collect();
        Jet { coeffs }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Result<Jet> {
        let prec = self.prec();
        let c0 = match self.coeffs.first() {
            Some(c) if !c.is_zero() => Float::with_val(prec, c),
            Some(_) => return Err(Error::ZeroConstantTerm),
            None => return Ok(Jet { coeffs: Vec::new() }),
        };
        let inv0 = Float::with_val(prec, c0.recip_ref());
        let mut out: Vec<Float> = vec![inv0.clone()];
        for k in 1..self.len() {
            let mut acc = Float::new(prec);
            for j in 1..=k {
                acc += Float::with_val(prec, &self.coeffs[j] * &out[k - j]);
            }
            out.push(-acc * &inv0);
        }
        Ok(Jet { coeffs: out })
    }
}

/// `Γ(s), Γ'(s), …, Γ^{(order)}(s)` at a rational point.
#[derive(Clone, Debug)]
pub struct GammaDerivs {
    pub point: Rational,
    pub order: usize,
    pub values: Vec<Float>,
}

impl GammaDerivs {
    pub fn jet(&self) -> Jet {
        Jet::from_derivatives(&self.values)
    }
}

/// Derivatives of `Γ` through `Γ' = ψΓ` and the Leibniz recursion
/// `Γ^{(j+1)} = Σ_i C(j,i) ψ^{(i)} Γ^{(j-i)}`.
pub fn gamma_deriv(order: usize, x: &Rational, prec: u32) -> Result<GammaDerivs> {
    let wp = prec + 32 + 2 * order as u32;
    let gamma = gamma_value(x, wp)?;
    let psis: Vec<Float> = (0..order as u32)
        .map(|i| polygamma(i, x, wp))
        .collect::<Result<_>>()?;
    let mut vals = vec![gamma];
    for j in 0..order {
        let mut acc = Float::new(wp);
        for i in 0..=j {
            let c = binomial(j as u32, i as u32);
            acc += Float::with_val(wp, &psis[i] * &vals[j - i]) * &c;
        }
        vals.push(acc);
    }
    Ok(GammaDerivs {
        point: x.clone(),
        order,
        values: vals.into_iter().map(|v| Float::with_val(prec, v)).collect(),
    })
}

/// Taylor jet of `1/Γ` at `x` with `len` coefficients. At nonpositive
/// integers, where `1/Γ` is entire with a zero, the jet comes from
/// `1/Γ(x+h) = (x+h)(x+1+h)…(h) / Γ(1+h)`.
pub fn recip_gamma_jet(x: &Rational, len: usize, prec: u32) -> Result<Jet> {
    let wp = prec + 32 + 2 * len as u32;
    if len == 0 {
        return Ok(Jet::new(Vec::new()));
    }
    let jet = if is_nonpositive_integer(x) {
        let m = -as_integer(x).expect("integer");
        let at_one = gamma_deriv(len - 1, &Rational::from(1), wp)?
            .jet()
            .recip()?;
        let mut acc = at_one;
        for j in 0..=m {
            acc = acc.mul(&Jet::linear(&Rational::from(x + j), len, wp));
        }
        acc
    } else {
        gamma_deriv(len - 1, x, wp)?.jet().recip()?
    };
    Ok(Jet::new(
        jet.coeffs
            .into_iter()
            .map(|c| Float::with_val(prec, c))
            .collect(),
    ))
}

/// `(1/Γ)^{(l)}(x)`.
pub fn recip_gamma_deriv(l: usize, x: &Rational, prec: u32) -> Result<Float> {
    let jet = recip_gamma_jet(x, l + 1, prec + 16)?;
    let d = jet.to_derivatives().pop().expect("nonempty jet");
    Ok(Float::with_val(prec, d))
}

/// Exposed for kernels that need `ψ` alongside the jet.
pub(crate) fn psi_and_polygammas(x: &Rational, n: usize, prec: u32) -> Result<Vec<Float>> {
    let mut out = vec![psi(x, prec)?];
    for i in 1..n as u32 {
        out.push(polygamma(i, x, prec)?);
    }
    Ok(out)
}
