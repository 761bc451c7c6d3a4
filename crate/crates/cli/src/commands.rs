//! One function per subcommand, each turning parsed arguments into a
//! [`Report`] plus the parameter map recorded in the manifest.

use std::collections::BTreeMap;
use std::fmt;

use eapprox::asymlab::{asym_check, EKind};
use eapprox::constructions::{
    agree_all, check_gamma_domain, e_convergent_index, e_convergents, euler_values, fit_growth,
    fit_growth_factorial, gamma_values, intseq, intseq_constants, limit_estimate, pade_exp,
    pade_q_ratio, pade_remainder, GrowthModel, Method,
};
use eapprox::gammalab::{euler_gamma, gamma_deriv, gamma_value};
use eapprox::numcore::format_digits;
use eapprox::par::{self, Execution};
use eapprox::Error;
use rug::{Float, Rational};

use crate::args::{
    AsymCheckArgs, Command, EConvergentsArgs, EulerArgs, FitArgs, GammaArgs, GammaDerivArgs,
    IntseqArgs, MethodArg, PadeArgs, Which,
};
use crate::report::{Report, Table};

/// Fewest values for which a limit estimate is reported.
const MIN_LIMIT_VALUES: usize = 16;
/// Fewest values for which an error-growth fit is reported.
const MIN_FIT_VALUES: usize = 32;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io {
        context: String,
        source: std::io::Error,
    },
    Core(Error),
    /// A replayed run produced different output.
    Mismatch(String),
}

impl CliError {
    pub fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core(Error::Precision(_) | Error::Disagreement(_)) => 3,
            CliError::Core(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io { context, source } => write!(f, "{context}: {source}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Mismatch(m) => write!(f, "replay mismatch: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Res<T> = std::result::Result<T, CliError>;

/// Settings shared by every command.
pub struct Ctx {
    pub prec: u32,
    pub digits: usize,
    pub exec: Execution,
}

impl Ctx {
    fn num(&self, x: &Float) -> String {
        format_digits(x, self.digits)
    }
}

pub type Params = BTreeMap<String, String>;

fn params<const N: usize>(pairs: [(&str, String); N]) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

/// Runs `command`, returning its manifest name, parameters and report.
pub fn dispatch(command: &Command, ctx: &Ctx) -> Res<(&'static str, Params, Report)> {
    Ok(match command {
        Command::GammaApprox(a) => ("gamma-approx", gamma_params(a), gamma_approx(a, ctx)?),
        Command::EulerApprox(a) => ("euler-approx", euler_params(a), euler_approx(a, ctx)?),
        Command::Pade(a) => (
            "pade",
            params([("n", a.n.to_string()), ("z", a.z.to_string())]),
            pade(a, ctx)?,
        ),
        Command::EConvergents(a) => (
            "e-convergents",
            params([("n", a.n.to_string())]),
            e_conv(a, ctx)?,
        ),
        Command::Intseq(a) => ("intseq", params([("k", a.k.to_string())]), int_seq(a, ctx)?),
        Command::AsymCheck(a) => ("asym-check", asym_params(a), asym(a, ctx)?),
        Command::GammaDeriv(a) => (
            "gamma-deriv",
            params([("s", a.s.to_string()), ("order", a.order.to_string())]),
            gamma_derivs(a, ctx)?,
        ),
        Command::Fit(a) => ("fit", fit_params(a), fit(a, ctx)?),
        Command::Replay(_) => {
            return Err(CliError::Usage(
                "replay cannot be nested in a manifest".into(),
            ))
        }
    })
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Closed => "closed",
        MethodArg::Recurrence => "recurrence",
        MethodArg::Series => "series",
        MethodArg::All => "all",
    }
}

fn gamma_params(a: &GammaArgs) -> Params {
    params([
        ("alpha", a.alpha.to_string()),
        ("n", a.n.to_string()),
        ("method", method_name(a.method).into()),
    ])
}

fn euler_params(a: &EulerArgs) -> Params {
    params([
        ("n", a.n.to_string()),
        ("method", method_name(a.method).into()),
    ])
}

/// Each method runs sequentially; `all` runs the three methods side by side
/// and requires exact agreement.
fn sequence<F>(method: MethodArg, ctx: &Ctx, compute: F) -> Res<Vec<Rational>>
where
    F: Fn(Method) -> eapprox::Result<Vec<Rational>> + Sync + Send,
{
    let single = |m| compute(m).map_err(CliError::from);
    match method {
        MethodArg::Closed => single(Method::Closed),
        MethodArg::Recurrence => single(Method::Recurrence),
        MethodArg::Series => single(Method::Series),
        MethodArg::All => Ok(agree_all(ctx.exec, compute)?),
    }
}

fn gamma_approx(a: &GammaArgs, ctx: &Ctx) -> Res<Report> {
    check_gamma_domain(&a.alpha)?;
    let values = sequence(a.method, ctx, |m| {
        gamma_values(&a.alpha, a.n, m, Execution::Sequential)
    })?;
    let reference = gamma_value(&a.alpha, ctx.prec)?;
    sequence_report(&values, a.method, &reference, ctx)
}

fn euler_approx(a: &EulerArgs, ctx: &Ctx) -> Res<Report> {
    let values = sequence(a.method, ctx, |m| {
        euler_values(a.n, m, Execution::Sequential)
    })?;
    let reference = euler_gamma(ctx.prec)?;
    sequence_report(&values, a.method, &reference, ctx)
}

fn exact_row(n: impl ToString, num: impl ToString, den: impl ToString) -> Vec<String> {
    vec![n.to_string(), num.to_string(), den.to_string()]
}

fn growth_estimates(report: &mut Report, prefix: &str, g: &GrowthModel) {
    report.estimate(format!("{prefix}q"), format!("{:.6}", g.q));
    report.estimate(format!("{prefix}u"), format!("{:.6}", g.u));
    report.estimate(format!("{prefix}v"), g.v.to_string());
    report.estimate(format!("{prefix}residual"), format!("{:.3e}", g.residual));
    report.estimate(format!("{prefix}oscillatory"), g.oscillatory.to_string());
    report.estimate(
        format!("{prefix}sub_geometric"),
        g.sub_geometric.to_string(),
    );
}

fn rate_string(rate: Option<f64>) -> String {
    rate.map(|r| format!("{r:.6}")).unwrap_or_default()
}

fn sequence_report(
    values: &[Rational],
    method: MethodArg,
    reference: &Float,
    ctx: &Ctx,
) -> Res<Report> {
    let mut table = Table::new(&["n", "numerator", "denominator"]);
    for (n, v) in values.iter().enumerate() {
        table.push(exact_row(n, v.numer(), v.denom()));
    }
    let mut report = Report::new(table);
    report.estimate("method", method_name(method));
    if method == MethodArg::All {
        report.estimate("exact_agreement", "true");
    }
    report.estimate("terms", values.len().to_string());
    report.estimate("reference", ctx.num(reference));
    if let Some(last) = values.last() {
        let err = Float::with_val(ctx.prec, last - reference).abs();
        report.estimate("last_abs_error", format_digits(&err, 6));
    }
    if values.len() >= MIN_LIMIT_VALUES {
        let est = limit_estimate(values, ctx.prec)?;
        let err = Float::with_val(ctx.prec, &est.limit - reference).abs();
        report.estimate("limit_estimate", ctx.num(&est.limit));
        report.estimate("rate_exponent", rate_string(est.rate_exponent));
        report.estimate("limit_abs_error", format_digits(&err, 6));
        report.footer = Some(vec![
            "limit_estimate".into(),
            ctx.num(&est.limit),
            rate_string(est.rate_exponent),
        ]);
    }
    if values.len() >= MIN_FIT_VALUES {
        let diffs: Vec<Float> = values
            .iter()
            .map(|v| Float::with_val(ctx.prec, v - reference))
            .collect();
        if let Ok(g) = fit_growth(&diffs) {
            growth_estimates(&mut report, "error_", &g);
        }
    }
    Ok(report)
}

fn pade(a: &PadeArgs, ctx: &Ctx) -> Res<Report> {
    let mut table = Table::new(&["n", "numerator", "denominator"]);
    let mut last = None;
    for m in 0..=a.n {
        let pair = pade_exp(m);
        let q = pair.q.eval(&a.z);
        if q == 0 {
            return Err(Error::Domain(format!("Q_{m}({}) = 0", a.z)).into());
        }
        let r = pair.p.eval(&a.z) / q;
        table.push(exact_row(m, r.numer(), r.denom()));
        last = Some((pair, r));
    }
    let (pair, approx) = last.expect("at least one row");
    let mut report = Report::new(table);

    let order = 2 * a.n as usize + 1;
    let remainder = pade_remainder(&pair, order + 1);
    let order_ok =
        remainder.coeffs()[..order].iter().all(|c| *c == 0) && remainder.coeffs()[order] != 0;
    report.estimate("order_condition", order_ok.to_string());

    let exp_z = Float::with_val(ctx.prec, &a.z).exp();
    let err = Float::with_val(ctx.prec, &approx - &exp_z).abs();
    report.estimate("exp_z", ctx.num(&exp_z));
    report.estimate("last_abs_error", format_digits(&err, 6));
    let qr = pade_q_ratio(a.n, &a.z);
    report.estimate("q_ratio", qr.to_string());
    report.estimate("q_ratio_value", ctx.num(&Float::with_val(ctx.prec, &qr)));
    if !order_ok {
        report.failure = Some(format!("Q_n e^z - P_n is not exactly O(z^{order})"));
    }
    Ok(report)
}

fn e_conv(a: &EConvergentsArgs, ctx: &Ctx) -> Res<Report> {
    let mut table = Table::new(&["n", "numerator", "denominator"]);
    let mut indices = Vec::new();
    let mut missing = Vec::new();
    let mut last = None;
    for n in 1..=a.n {
        let (p, q) = e_convergents(n)?;
        match e_convergent_index(&p, &q, 3 * n as usize + 2) {
            Some(i) => indices.push(i.to_string()),
            None => missing.push(n.to_string()),
        }
        table.push(exact_row(n, &p, &q));
        last = Some(Rational::from((p, q)));
    }
    let mut report = Report::new(table);
    let e = Float::with_val(ctx.prec, 1).exp();
    let last = last.expect("n >= 1");
    report.estimate("e", ctx.num(&e));
    report.estimate(
        "last_abs_error",
        format_digits(&Float::with_val(ctx.prec, &last - &e).abs(), 6),
    );
    report.estimate("convergent_indices", indices.join(" "));
    if !missing.is_empty() {
        report.failure = Some(format!(
            "not a convergent of e for n = {}",
            missing.join(", ")
        ));
    }
    Ok(report)
}

fn int_seq(a: &IntseqArgs, ctx: &Ctx) -> Res<Report> {
    let k = a.k as usize;
    let seq = intseq(k, ctx.prec)?;
    let mut table = Table::new(&["n", "numerator", "denominator"]);
    for (i, (u, v)) in seq.u.iter().zip(&seq.v).enumerate() {
        table.push(exact_row(i, u, v));
    }
    let mut report = Report::new(table);
    let target = seq.target_ratio();
    report.estimate("target_ratio", ctx.num(&target));
    if let Some(r) = seq.ratio(k) {
        let err = Float::with_val(ctx.prec, &r - &target).abs();
        report.estimate("last_ratio", ctx.num(&Float::with_val(ctx.prec, &r)));
        report.estimate("last_abs_error", format_digits(&err, 6));
    }
    report.estimate("last_linear_form", ctx.num(&seq.linear_form(k)));
    let c = intseq_constants(ctx.prec)?;
    for (name, x) in [("a", &c.a), ("b", &c.b), ("c", &c.c), ("d", &c.d)] {
        report.estimate(name, ctx.num(x));
    }
    report.estimate("wronskian", ctx.num(&c.denominator));
    Ok(report)
}

fn asym_params(a: &AsymCheckArgs) -> Params {
    let which = match a.which {
        Which::Ealpha => "ealpha",
        Which::Elog => "elog",
    };
    let z: Vec<String> = a.z.iter().map(|z| z.to_string()).collect();
    let mut p = params([
        ("which", which.into()),
        ("z", z.join(",")),
        ("tol", a.tol.to_string()),
    ]);
    if a.which == Which::Ealpha {
        p.insert("alpha".into(), a.alpha.to_string());
    }
    p
}

fn asym(a: &AsymCheckArgs, ctx: &Ctx) -> Res<Report> {
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()).into());
    }
    if let Some(z) = a.z.iter().find(|z| **z < 1) {
        return Err(Error::Domain(format!("z = {z}: the expansion needs z >= 1")).into());
    }
    let kind = match a.which {
        Which::Ealpha => EKind::EAlpha(a.alpha.clone()),
        Which::Elog => EKind::ELog,
    };
    let checks = par::map_slice(ctx.exec, &a.z, |z| {
        asym_check(&kind, &Float::with_val(ctx.prec, z), ctx.prec, a.tol)
    });
    let mut table = Table::new(&[
        "z",
        "truncation",
        "direct",
        "asymptotic",
        "rel_error",
        "pass",
    ]);
    let mut failed = Vec::new();
    for (z, check) in a.z.iter().zip(checks) {
        let c = check?;
        if !c.pass {
            failed.push(z.to_string());
        }
        table.push(vec![
            z.to_string(),
            c.truncation.to_string(),
            ctx.num(&c.direct),
            ctx.num(&c.asymptotic),
            format_digits(&c.rel_error, 6),
            c.pass.to_string(),
        ]);
    }
    let mut report = Report::new(table);
    if let [row] = report.table.rows.as_slice() {
        let row = row.clone();
        for (name, cell) in report.table.columns.clone().into_iter().zip(row) {
            report.estimate(name, cell);
        }
    }
    report.estimate("tolerance", format!("{:e}", a.tol));
    report.estimate("all_pass", failed.is_empty().to_string());
    if !failed.is_empty() {
        report.failure = Some(format!(
            "relative error above {:e} at z = {}",
            a.tol,
            failed.join(", ")
        ));
    }
    Ok(report)
}

fn gamma_derivs(a: &GammaDerivArgs, ctx: &Ctx) -> Res<Report> {
    let d = gamma_deriv(a.order, &a.s, ctx.prec)?;
    let mut table = Table::new(&["n", "value"]);
    for (n, v) in d.values.iter().enumerate() {
        table.push(vec![n.to_string(), ctx.num(v)]);
    }
    let mut report = Report::new(table);
    report.estimate("point", a.s.to_string());
    Ok(report)
}

fn fit_params(a: &FitArgs) -> Params {
    let mut p = params([
        ("input", a.input.display().to_string()),
        ("against-limit", a.against_limit.to_string()),
    ]);
    if let Some(d) = a.factorial {
        p.insert("factorial".into(), d.to_string());
    }
    p
}

/// A value read from a fit input: exact when written as a rational.
enum Value {
    Exact(Rational),
    Approx(Float),
}

fn parse_value(cell: &str, prec: u32) -> Option<Value> {
    let cell = cell.trim();
    if let Ok(q) = cell.parse::<Rational>() {
        return Some(Value::Exact(q));
    }
    Float::parse(cell)
        .ok()
        .map(|p| Value::Approx(Float::with_val(prec, p)))
}

/// Reads one value per line, or the value columns of a CSV table. Header,
/// footer and comment lines are skipped.
fn read_values(text: &str, prec: u32) -> Res<Vec<Value>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let first_is_label = cells[0]
            .trim()
            .starts_with(|c: char| c.is_ascii_alphabetic());
        if first_is_label {
            continue;
        }
        let bad = || CliError::Usage(format!("line {}: cannot parse `{line}`", lineno + 1));
        let value = match cells.as_slice() {
            [v] | [_, v] => parse_value(v, prec).ok_or_else(bad)?,
            [_, num, den] => {
                let q = format!("{}/{}", num.trim(), den.trim());
                Value::Exact(q.parse::<Rational>().map_err(|_| bad())?)
            }
            _ => return Err(bad()),
        };
        out.push(value);
    }
    Ok(out)
}

fn fit(a: &FitArgs, ctx: &Ctx) -> Res<Report> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(CliError::io(format!("reading {}", a.input.display())))?;
    let values = read_values(&text, ctx.prec)?;
    if values.len() < MIN_LIMIT_VALUES {
        return Err(Error::InsufficientOrder {
            needed: MIN_LIMIT_VALUES,
            have: values.len(),
        }
        .into());
    }
    let mut table = Table::new(&["quantity", "value"]);
    let mut floats: Vec<Float> = values
        .iter()
        .map(|v| match v {
            Value::Exact(q) => Float::with_val(ctx.prec, q),
            Value::Approx(x) => x.clone(),
        })
        .collect();
    table.push(vec!["points".into(), floats.len().to_string()]);
    if a.against_limit {
        let exact: Vec<Rational> = values
            .iter()
            .map(|v| match v {
                Value::Exact(q) => Some(q.clone()),
                Value::Approx(x) => x.to_rational(),
            })
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Domain("non-finite value in input".into()))?;
        let est = limit_estimate(&exact, ctx.prec)?;
        table.push(vec!["limit_estimate".into(), ctx.num(&est.limit)]);
        table.push(vec!["rate_exponent".into(), rate_string(est.rate_exponent)]);
        for x in &mut floats {
            *x -= &est.limit;
        }
    }
    let g = match a.factorial {
        Some(d) => fit_growth_factorial(&floats, d)?,
        None => fit_growth(&floats)?,
    };
    let mut report = Report::new(table);
    for row in report.table.rows.clone() {
        report.estimate(row[0].clone(), row[1].clone());
    }
    let before = report.estimates.len();
    growth_estimates(&mut report, "", &g);
    let fitted = report.estimates[before..].to_vec();
    for (k, v) in fitted {
        report.table.push(vec![k, v]);
    }
    Ok(report)
}
