//! The Bessel-type sequence `A_k = (-1)^k Σ_n 1/(n!(n+k)!)`, its integer
//! companions `U_k, V_k`, and the constants `a, b, c, d` expressing their
//! exponential generating functions through `F(1-z)` and `G(1-z)`.

use rug::{Float, Integer, Rational};

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct IntSeq {
    /// `A_k` summed directly from its series.
    pub a_direct: Vec<Float>,
    /// `A_k` from `A_{k+1} = k A_k + A_{k-1}` seeded with `A_0, A_1`.
    pub a_recurrence: Vec<Float>,
    /// `U_0 = 0, U_1 = 1`, same recurrence.
    pub u: Vec<Integer>,
    /// `V_0 = 1, V_1 = 0`, same recurrence.
    pub v: Vec<Integer>,
    /// `F(1)`
    pub f: Float,
    /// `F'(1)`
    pub f_prime: Float,
    pub precision: u32,
}

impl IntSeq {
    /// `U_k / V_k`; `None` when `V_k = 0` (only `k = 1`).
    pub fn ratio(&self, k: usize) -> Option<Rational> {
        (self.v[k] != 0).then(|| Rational::from((self.u[k].clone(), self.v[k].clone())))
    }

    /// `V_k F(1) - U_k F'(1)`.
    pub fn linear_form(&self, k: usize) -> Float {
        let wp = self.precision + 2 * bits_of(&self.v[k]) + 64;
        let f = Float::with_val(wp, &self.f);
        let fp = Float::with_val(wp, &self.f_prime);
        let r = f * &self.v[k] - fp * &self.u[k];
        Float::with_val(self.precision, r)
    }

    /// `F(1)/F'(1)`
    pub fn target_ratio(&self) -> Float {
        Float::with_val(self.precision, &self.f / &self.f_prime)
    }
}

fn bits_of(x: &Integer) -> u32 {
    x.significant_bits()
}

/// `Σ_n t_n` with `t_{n+1} = t_n · step(n)` until the term falls below
/// `2^{-prec}` relative to the sum.
fn sum_by_ratio(first: Float, prec: u32, step: impl Fn(u32, &mut Float)) -> Float {
    let mut sum = Float::with_val(prec, &first);
    let mut term = first;
    let mut n = 0u32;
    loop {
        step(n, &mut term);
        n += 1;
        sum += &term;
        if term.is_zero() {
            break;
        }
        let rel = Float::with_val(32, term.abs_ref()) / Float::with_val(32, sum.abs_ref());
        if n > 4 && rel < Float::with_val(32, Float::i_exp(1, -(prec as i32) - 8)) {
            break;
        }
    }
    sum
}

/// Direct `A_k` at `prec` bits.
fn a_direct(k: u32, prec: u32) -> Float {
    let first = Float::with_val(prec, Float::factorial(k)).recip();
    let s = sum_by_ratio(first, prec, |n, t| {
        *t /= (n + 1) as u64 * (n + k + 1) as u64;
    });
    if k % 2 == 1 {
        -s
    } else {
        s
    }
}

pub fn intseq(kmax: usize, prec: u32) -> Result<IntSeq> {
    if kmax < 2 {
        return Err(Error::domain("intseq requires kmax >= 2"));
    }
    let wp = prec + 32;
    let a_direct_v: Vec<Float> =
        crate::par::map_range(crate::par::Execution::default(), kmax + 1, |k| {
            Float::with_val(prec, a_direct(k as u32, wp))
        });

    let mut u = vec![Integer::from(0), Integer::from(1)];
    let mut v = vec![Integer::from(1), Integer::from(0)];
    for k in 1..kmax {
        let un = Integer::from(&u[k] * k as u32) + &u[k - 1];
        let vn = Integer::from(&v[k] * k as u32) + &v[k - 1];
        u.push(un);
        v.push(vn);
    }

    // forward recurrence cancels about log2(V_k^2) bits
    let rec_prec = wp + 2 * bits_of(&v[kmax]) + 64;
    let mut a_rec = vec![a_direct(0, rec_prec), a_direct(1, rec_prec)];
    for k in 1..kmax {
        let next = Float::with_val(rec_prec, &a_rec[k] * k as u32) + &a_rec[k - 1];
        a_rec.push(next);
    }
    let a_recurrence = a_rec.iter().map(|x| Float::with_val(prec, x)).collect();
    let f = a_direct_v[0].clone();
    let f_prime = Float::with_val(prec, -&a_direct_v[1]);
    Ok(IntSeq {
        a_direct: a_direct_v,
        a_recurrence,
        u,
        v,
        f,
        f_prime,
        precision: prec,
    })
}

/// `F(x) = Σ x^n / n!²`
pub fn eval_f_bessel(x: &Float, prec: u32) -> Float {
    let wp = prec + 32;
    let x = Float::with_val(wp, x);
    Float::with_val(
        prec,
        sum_by_ratio(Float::with_val(wp, 1), wp, |n, t| {
            *t *= &x;
            *t /= ((n + 1) as u64).pow(2);
        }),
    )
}

/// `G(x) = -2 Σ H_n x^n / n!²`
pub fn eval_g_bessel(x: &Float, prec: u32) -> Float {
    let wp = prec + 32;
    let x = Float::with_val(wp, x);
    let mut sum = Float::new(wp);
    let mut pow = Float::with_val(wp, 1);
    let mut h = Float::new(wp);
    let eps = Float::with_val(32, Float::i_exp(1, -(wp as i32) - 8));
    for n in 1u64.. {
        pow *= &x;
        pow /= n * n;
        h += Float::with_val(wp, n).recip();
        let term = Float::with_val(wp, &pow * &h);
        sum += &term;
        if n > 4 && Float::with_val(32, term.abs_ref()) <= Float::with_val(32, sum.abs_ref()) * &eps
        {
            break;
        }
    }
    Float::with_val(prec, sum * -2i32)
}

/// `F'(x) = Σ_{n≥0} x^n / (n! (n+1)!)`
fn eval_f_bessel_prime(x: &Float, prec: u32) -> Float {
    let wp = prec + 32;
    let x = Float::with_val(wp, x);
    Float::with_val(
        prec,
        sum_by_ratio(Float::with_val(wp, 1), wp, |n, t| {
            *t *= &x;
            *t /= (n + 1) as u64 * (n + 2) as u64;
        }),
    )
}

/// `G'(x) = -2 Σ_{n≥1} n H_n x^{n-1} / n!²`
fn eval_g_bessel_prime(x: &Float, prec: u32) -> Float {
    let wp = prec + 32;
    let x = Float::with_val(wp, x);
    let mut sum = Float::new(wp);
    // c_n = x^{n-1} / (n! (n-1)!)
    let mut c = Float::with_val(wp, 1);
    let mut h = Float::new(wp);
    let eps = Float::with_val(32, Float::i_exp(1, -(wp as i32) - 8));
    for n in 1u64.. {
        if n > 1 {
            c *= &x;
            c /= n * (n - 1);
        }
        h += Float::with_val(wp, n).recip();
        let term = Float::with_val(wp, &c * &h);
        sum += &term;
        if n > 4 && Float::with_val(32, term.abs_ref()) <= Float::with_val(32, sum.abs_ref()) * &eps
        {
            break;
        }
    }
    Float::with_val(prec, sum * -2i32)
}

#[derive(Clone, Debug)]
pub struct IntSeqConstants {
    pub f: Float,
    pub f_prime: Float,
    pub g: Float,
    pub g_prime: Float,
    pub a: Float,
    pub b: Float,
    pub c: Float,
    pub d: Float,
    /// `g f' - f² - f g'`
    pub denominator: Float,
}

pub fn intseq_constants(prec: u32) -> Result<IntSeqConstants> {
    let wp = prec + 32;
    let one = Float::with_val(wp, 1);
    let f = eval_f_bessel(&one, wp);
    let fp = eval_f_bessel_prime(&one, wp);
    let g = eval_g_bessel(&one, wp);
    let gp = eval_g_bessel_prime(&one, wp);
    let den = Float::with_val(wp, &g * &fp)
        - Float::with_val(wp, &f * &f)
        - Float::with_val(wp, &f * &gp);
    let floor = Float::with_val(wp, Float::i_exp(1, -((prec / 2) as i32)));
    if Float::with_val(wp, den.abs_ref()) <= floor {
        return Err(Error::precision(
            "denominator g f' - f^2 - f g' not separated from zero",
        ));
    }
    let r = |x: Float| Float::with_val(prec, x);
    // U(0) = 0, U'(0) = 1 together with F(1-z) = f·V(z) - f'·U(z) force
    // a = -g/D and b = f/D
    let a = r(-Float::with_val(wp, &g / &den));
    let b = r(Float::with_val(wp, &f / &den));
    let c = r(-Float::with_val(wp, Float::with_val(wp, &f + &gp) / &den));
    let d = r(Float::with_val(wp, &fp / &den));
    Ok(IntSeqConstants {
        f: r(f),
        f_prime: r(fp),
        g: r(g),
        g_prime: r(gp),
        a,
        b,
        c,
        d,
        denominator: r(den),
    })
}

fn integer_egf(z: &Float, prec: u32, seed: (i64, i64)) -> Result<Float> {
    if Float::with_val(z.prec(), z.abs_ref()) >= 1 {
        return Err(Error::domain(
            "generating function converges only for |z| < 1",
        ));
    }
    let wp = prec + 32;
    let z = Float::with_val(wp, z);
    let (mut prev, mut cur) = (Integer::from(seed.0), Integer::from(seed.1));
    // term_k = W_k z^k / k!
    let mut zk = Float::with_val(wp, 1);
    let mut sum = Float::with_val(wp, &prev);
    let eps = Float::with_val(32, Float::i_exp(1, -(wp as i32) - 8));
    let mut k = 1u32;
    loop {
        zk *= &z;
        zk /= k;
        let term = Float::with_val(wp, &zk * &cur);
        sum += &term;
        let small =
            Float::with_val(32, term.abs_ref()) <= Float::with_val(32, sum.abs_ref()) * &eps;
        if k > 8 && small {
            break;
        }
        let next = Integer::from(&cur * k) + &prev;
        prev = std::mem::replace(&mut cur, next);
        k += 1;
    }
    Ok(Float::with_val(prec, sum))
}

/// `Σ_k U_k z^k / k! = a F(1-z) + b (G(1-z) + log(1-z) F(1-z))`
pub fn u_generating_function(z: &Float, prec: u32) -> Result<Float> {
    integer_egf(z, prec, (0, 1))
}

/// `Σ_k V_k z^k / k! = c F(1-z) + d (G(1-z) + log(1-z) F(1-z))`
pub fn v_generating_function(z: &Float, prec: u32) -> Result<Float> {
    integer_egf(z, prec, (1, 0))
}

/// `p F(1-z) + q G(1-z) + q log(1-z) F(1-z)` for `z < 1`.
pub fn bessel_combination(p: &Float, q: &Float, z: &Float, prec: u32) -> Result<Float> {
    let wp = prec + 32;
    let x = Float::with_val(wp, 1) - Float::with_val(wp, z);
    if x <= 0 {
        return Err(Error::domain("bessel_combination requires z < 1"));
    }
    let f = eval_f_bessel(&x, wp);
    let g = eval_g_bessel(&x, wp);
    let log = Float::with_val(wp, x.ln_ref());
    let r = Float::with_val(wp, p * &f)
        + Float::with_val(wp, q * &g)
        + Float::with_val(wp, q * &log) * &f;
    Ok(Float::with_val(prec, r))
}
