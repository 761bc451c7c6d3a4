//! Limit, rate and growth-model estimation for computed sequence prefixes.
//!
//! The sequences here converge with an error that oscillates like
//! `n^{-κ} cos(2√n + φ)`: the sign changes on a scale that grows with
//! `√n`. The default limit estimator is therefore a taper-weighted mean
//! over the tail, with a `sin²` window in the variable `t = √n`, which
//! averages whole oscillation periods. Aitken's Δ² is available for
//! geometrically converging input.

use rug::float::Constant;
use rug::{Float, Rational};

use crate::{Error, Result};

pub(crate) const MIN_LIMIT_VALUES: usize = 16;
pub(crate) const MIN_FIT_VALUES: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LimitMethod {
    /// `sin²`-tapered mean in `√n` over the last three quarters.
    #[default]
    SmoothedMean,
    /// Aitken Δ² on the last three values.
    Aitken,
}

#[derive(Clone, Debug)]
pub struct LimitOptions {
    pub method: LimitMethod,
    /// Index window `[lo, hi)` for the rate fit; defaults to the last half.
    pub rate_window: Option<(usize, usize)>,
    pub prec: u32,
}

impl LimitOptions {
    pub fn new(prec: u32) -> Self {
        LimitOptions {
            method: LimitMethod::default(),
            rate_window: None,
            prec,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LimitEstimate {
    pub limit: Float,
    /// Slope of `log |P_n - limit|` against `log n`; `None` when undefined.
    pub rate_exponent: Option<f64>,
    pub method: LimitMethod,
    /// Set for constant input.
    pub degenerate: bool,
}

pub fn limit_estimate(values: &[Rational], prec: u32) -> Result<LimitEstimate> {
    limit_estimate_with(values, &LimitOptions::new(prec))
}

pub fn limit_estimate_with(values: &[Rational], opts: &LimitOptions) -> Result<LimitEstimate> {
    if values.len() < MIN_LIMIT_VALUES {
        return Err(Error::domain(format!(
            "limit estimation needs at least {MIN_LIMIT_VALUES} values, got {}",
            values.len()
        )));
    }
    let prec = opts.prec;
    if values.iter().all(|v| *v == values[0]) {
        return Ok(LimitEstimate {
            limit: Float::with_val(prec, &values[0]),
            rate_exponent: None,
            method: opts.method,
            degenerate: true,
        });
    }
    let xs: Vec<Float> = values.iter().map(|v| Float::with_val(prec, v)).collect();
    let limit = match opts.method {
        LimitMethod::SmoothedMean => smoothed_mean(&xs, prec),
        LimitMethod::Aitken => aitken(&xs, prec),
    };
    let n = xs.len();
    let window = opts.rate_window.unwrap_or((n / 2, n));
    let rate_exponent = rate_exponent(&xs, &limit, window);
    Ok(LimitEstimate {
        limit,
        rate_exponent,
        method: opts.method,
        degenerate: false,
    })
}

fn smoothed_mean(xs: &[Float], prec: u32) -> Float {
    let n = xs.len();
    let lo = (n / 4).max(1);
    let pi = Float::with_val(prec, Constant::Pi);
    let t0 = Float::with_val(prec, lo).sqrt();
    let t1 = Float::with_val(prec, n - 1).sqrt();
    let span = Float::with_val(prec, &t1 - &t0);
    let mut num = Float::new(prec);
    let mut den = Float::new(prec);
    for (i, x) in xs.iter().enumerate().take(n).skip(lo) {
        let t = Float::with_val(prec, i).sqrt();
        let s = Float::with_val(prec, &t - &t0) / &span;
        let sin = Float::with_val(prec, &pi * &s).sin();
        // dt = dn / (2t)
        let w = Float::with_val(prec, sin.square_ref()) / (t * 2u32);
        num += Float::with_val(prec, &w * x);
        den += w;
    }
    num / den
}

fn aitken(xs: &[Float], prec: u32) -> Float {
    let n = xs.len();
    let (a, b, c) = (&xs[n - 3], &xs[n - 2], &xs[n - 1]);
    let d1 = Float::with_val(prec, c - b);
    let d0 = Float::with_val(prec, b - a);
    let den = Float::with_val(prec, &d1 - &d0);
    if den.is_zero() {
        return c.clone();
    }
    let corr = Float::with_val(prec, d1.square_ref()) / den;
    Float::with_val(prec, c - corr)
}

/// Least-squares slope of `log |x_n - limit|` against `log n` over the
/// local maxima of the error inside `[lo, hi)`; all points are used when
/// fewer than three maxima exist.
pub fn rate_exponent(xs: &[Float], limit: &Float, window: (usize, usize)) -> Option<f64> {
    let (lo, hi) = (window.0.max(1), window.1.min(xs.len()));
    if hi <= lo + 2 {
        return None;
    }
    let err: Vec<Option<f64>> = (lo..hi)
        .map(|i| {
            let e = Float::with_val(limit.prec(), &xs[i] - limit).abs();
            (!e.is_zero()).then(|| e.ln().to_f64())
        })
        .collect();
    let mut peaks = Vec::new();
    for j in 1..err.len() - 1 {
        if let (Some(a), Some(b), Some(c)) = (err[j - 1], err[j], err[j + 1]) {
            if b >= a && b >= c {
                peaks.push(((lo + j) as f64, b));
            }
        }
    }
    let pts: Vec<(f64, f64)> = if peaks.len() >= 3 {
        peaks
    } else {
        err.iter()
            .enumerate()
            .filter_map(|(j, e)| e.map(|e| ((lo + j) as f64, e)))
            .collect()
    };
    let pts: Vec<(f64, f64)> = pts.into_iter().map(|(n, e)| (n.ln(), e)).collect();
    ls_slope(&pts)
}

fn ls_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `|P_n| ≈ C q^n n^{-u-1} (log n)^v`, fitted on the modulus only.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthModel {
    pub q: f64,
    pub u: f64,
    pub v: u32,
    /// RMS residual of the log fit.
    pub residual: f64,
    /// The modulus oscillates; `q` and `u` come from the envelope.
    pub oscillatory: bool,
    /// Ratios tend to zero (factorial decay); `u`, `v` are not meaningful.
    pub sub_geometric: bool,
}

/// Fits the growth model by successive ratio analysis.
///
/// Ratio analysis first separates factorial decay (ratios tending to zero)
/// and oscillating moduli. Otherwise `log |P_n| - v log log n` is fitted
/// against `(1, n, log n, 1/n)` over the second half for each
/// `v ∈ {0, 1, 2}`, keeping the `v` with the smallest residual.
pub fn fit_growth(values: &[Float]) -> Result<GrowthModel> {
    let logs: Vec<(usize, f64)> = values
        .iter()
        .enumerate()
        .skip(2)
        .filter(|(_, x)| !x.is_zero())
        .map(|(n, x)| (n, Float::with_val(x.prec(), x.abs_ref()).ln().to_f64()))
        .collect();
    fit_logs(values.len(), &logs)
}

/// [`fit_growth`] applied to `|P_n| (n!)^{1/d}`.
pub fn fit_growth_factorial(values: &[Float], d: u32) -> Result<GrowthModel> {
    if d == 0 {
        return Err(Error::domain("factorial normalization needs d >= 1"));
    }
    let mut log_fact = 0.0f64;
    let mut logs = Vec::new();
    for (n, x) in values.iter().enumerate() {
        if n > 0 {
            log_fact += (n as f64).ln();
        }
        if n >= 2 && !x.is_zero() {
            let l = Float::with_val(x.prec(), x.abs_ref()).ln().to_f64();
            logs.push((n, l + log_fact / d as f64));
        }
    }
    fit_logs(values.len(), &logs)
}

fn fit_logs(len: usize, logs: &[(usize, f64)]) -> Result<GrowthModel> {
    if len < MIN_FIT_VALUES {
        return Err(Error::domain(format!(
            "growth fit needs at least {MIN_FIT_VALUES} values, got {len}"
        )));
    }
    let tail: Vec<(usize, f64)> = logs
        .iter()
        .copied()
        .filter(|(n, _)| *n >= len / 2)
        .collect();
    if tail.len() < 8 {
        return Err(Error::Degenerate(
            "sequence is not eventually nonzero".into(),
        ));
    }
    // consecutive log-ratios d_n on runs of consecutive indices
    let ratios: Vec<(usize, f64)> = tail
        .windows(2)
        .filter(|w| w[1].0 == w[0].0 + 1)
        .map(|w| (w[0].0, w[1].1 - w[0].1))
        .collect();
    let second: Vec<f64> = ratios.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let sign_changes = second
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum() && w[0] != 0.0 && w[1] != 0.0)
        .count();
    let oscillatory = ratios.len() < tail.len() / 2 || sign_changes * 10 > second.len().max(1);

    if oscillatory {
        return fit_envelope(logs, len);
    }

    let (n1, d1) = ratios[ratios.len() - 1];
    let (n0, d0) = ratios[ratios.len() - 2];
    let r1 = d1.exp();
    let r0 = d0.exp();
    let first = ratios[0].1.exp();
    // r_n = q (1 - (u+1)/n + O(n^-2)) => (n+1) r_{n+1} - n r_n = q + O(n^-2)
    let q = (n1 as f64 + 1.0) * r1 - (n0 as f64 + 1.0) * r0;
    if r1 < 0.75 * first || q <= 1e-3 * r1 {
        return Ok(GrowthModel {
            q: 0.0,
            u: f64::NAN,
            v: 0,
            residual: f64::NAN,
            oscillatory: false,
            sub_geometric: true,
        });
    }
    let mut best: Option<GrowthModel> = None;
    for v in 0..=2u32 {
        let rows: Vec<Vec<f64>> = tail
            .iter()
            .map(|&(n, _)| {
                let nf = n as f64;
                vec![nf, nf.ln(), 1.0 / nf]
            })
            .collect();
        let ys: Vec<f64> = tail
            .iter()
            .map(|&(n, l)| l - v as f64 * (n as f64).ln().ln())
            .collect();
        if let Some((beta, residual)) = least_squares(&rows, &ys) {
            let cand = GrowthModel {
                q: beta[1].exp(),
                u: -beta[2] - 1.0,
                v,
                residual,
                oscillatory: false,
                sub_geometric: false,
            };
            if best.as_ref().is_none_or(|b| residual < b.residual) {
                best = Some(cand);
            }
        }
    }
    best.ok_or_else(|| Error::Degenerate("growth fit is singular".into()))
}

/// Envelope fit for oscillating moduli: local maxima of `log |P_n|` from the
/// first tenth of the data on, least squares against `(1, n, log n)`.
fn fit_envelope(logs: &[(usize, f64)], len: usize) -> Result<GrowthModel> {
    let pts: Vec<(usize, f64)> = logs
        .iter()
        .copied()
        .filter(|(n, _)| *n >= len / 10)
        .collect();
    let mut peaks = Vec::new();
    for w in pts.windows(3) {
        if w[1].1 >= w[0].1 && w[1].1 >= w[2].1 {
            peaks.push((w[1].0 as f64, w[1].1));
        }
    }
    if peaks.len() < 4 {
        return Err(Error::Degenerate(
            "too few envelope points in oscillating input".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = peaks.iter().map(|&(n, _)| vec![n, n.ln()]).collect();
    let ys: Vec<f64> = peaks.iter().map(|p| p.1).collect();
    let (beta, residual) = least_squares(&rows, &ys)
        .ok_or_else(|| Error::Degenerate("envelope fit is singular".into()))?;
    Ok(GrowthModel {
        q: beta[1].exp(),
        u: -beta[2] - 1.0,
        v: 0,
        residual,
        oscillatory: true,
        sub_geometric: false,
    })
}

/// Least squares for `y = b_0 + Σ b_j x_j` (intercept implicit), solved on
/// standardized columns by Gaussian elimination with partial pivoting.
/// Returns `(b, rms residual)`.
fn least_squares(rows: &[Vec<f64>], ys: &[f64]) -> Option<(Vec<f64>, f64)> {
    let m = rows.len();
    let k = rows.first()?.len();
    if m <= k + 1 {
        return None;
    }
    let mf = m as f64;
    let mean: Vec<f64> = (0..k)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / mf)
        .collect();
    let sd: Vec<f64> = (0..k)
        .map(|j| (rows.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / mf).sqrt())
        .collect();
    if sd.contains(&0.0) {
        return None;
    }
    let my = ys.iter().sum::<f64>() / mf;
    let z = |r: &[f64], j: usize| (r[j] - mean[j]) / sd[j];
    // augmented normal equations
    let mut a = vec![vec![0.0; k + 1]; k];
    for (r, y) in rows.iter().zip(ys) {
        for i in 0..k {
            let zi = z(r, i);
            for j in 0..k {
                a[i][j] += zi * z(r, j);
            }
            a[i][k] += zi * (y - my);
        }
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))?;
        if a[piv][col].abs() < 1e-14 * mf {
            return None;
        }
        a.swap(col, piv);
        for row in 0..k {
            if row != col {
                let f = a[row][col] / a[col][col];
                for c in col..=k {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut beta = vec![my];
    for j in 0..k {
        let bj = a[j][k] / a[j][j] / sd[j];
        beta[0] -= bj * mean[j];
        beta.push(bj);
    }
    let rss: f64 = rows
        .iter()
        .zip(ys)
        .map(|(r, y)| {
            let fit = beta[0] + (0..k).map(|j| beta[j + 1] * r[j]).sum::<f64>();
            (y - fit).powi(2)
        })
        .sum();
    Some((beta, (rss / mf).sqrt()))
}
