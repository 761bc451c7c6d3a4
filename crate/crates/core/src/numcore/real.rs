use rug::{Float, Rational};

use crate::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 256;

/// Environment variable overriding [`DEFAULT_PREC`] in front ends.
pub const PREC_ENV_VAR: &str = "EOP_DEFAULT_PREC";

pub fn to_float(x: &Rational, prec: u32) -> Float {
    Float::with_val(prec, x)
}

/// `|a - b| / |b|`, or `|a|` when `b = 0`.
pub fn rel_diff(a: &Float, b: &Float) -> Float {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    if b.is_zero() {
        diff
    } else {
        diff / Float::with_val(prec, b.abs_ref())
    }
}

pub fn within_rel(a: &Float, b: &Float, tol: f64) -> bool {
    rel_diff(a, b) <= tol
}

/// Evaluates `f` at `prec` and `2 * prec` bits and accepts the low-precision
/// value only if the two agree to `prec - guard` bits relative.
pub fn double_run<F>(prec: u32, guard: u32, f: F) -> Result<Float>
where
    F: Fn(u32) -> Result<Float>,
{
    let lo = f(prec)?;
    let hi = f(2 * prec)?;
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec.saturating_sub(guard) as i32)));
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::precision("non-finite value in double run"));
    }
    if rel_diff(&lo, &hi) <= tol {
        Ok(lo)
    } else {
        Err(Error::precision(format!(
            "double run disagrees beyond 2^-{} (p = {prec}, guard = {guard})",
            prec.saturating_sub(guard)
        )))
    }
}

/// Scientific decimal string with exactly `digits` significant digits,
/// e.g. `1.7724538509e0`.
pub fn format_digits(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return format!("0.{}e0", "0".repeat(digits.saturating_sub(1)));
    }
    x.to_string_radix(10, Some(digits.max(1)))
}
