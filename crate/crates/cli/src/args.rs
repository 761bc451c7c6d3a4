use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use rug::Rational;

#[derive(Parser, Debug)]
#[command(
    name = "eapprox",
    version,
    about = "Exact rational approximations to Γ(α), γ, e and a Bessel ratio, with high-precision checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Significant digits for every numeric (non-exact) value.
    #[arg(long, global = true, default_value_t = 20,
          value_parser = clap::value_parser!(u32).range(1..=100_000))]
    pub digits: u32,

    /// Working precision in bits.
    #[arg(long, global = true, env = "EOP_DEFAULT_PREC", default_value_t = 256,
          value_parser = clap::value_parser!(u32).range(16..=4_194_304))]
    pub prec: u32,

    /// Worker threads for independent sweeps (method comparison, z grids).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Write the run manifest here. Defaults to `<output>.manifest.json`, or
    /// stderr when writing to stdout.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Recurrence,
    Series,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Ealpha,
    Elog,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rational approximations P_n(α) → Γ(α), for α < 1.
    GammaApprox(GammaArgs),
    /// Rational approximations P_n → Euler's constant.
    EulerApprox(EulerArgs),
    /// Diagonal Padé approximants P_m(z)/Q_m(z) of exp(z), m = 0..=n.
    Pade(PadeArgs),
    /// Convergents of e obtained from n! P_n(1) and n! Q_n(1).
    EConvergents(EConvergentsArgs),
    /// Integer sequences U_k, V_k approximating F(1)/F'(1).
    Intseq(IntseqArgs),
    /// Optimally truncated asymptotic expansion against direct summation.
    AsymCheck(AsymCheckArgs),
    /// Derivatives Γ^(n)(s), n = 0..=order.
    GammaDeriv(GammaDerivArgs),
    /// Fits |x_n| ~ C q^n n^(-u-1) (log n)^v to a sequence read from a file.
    Fit(FitArgs),
    /// Re-runs a manifest and compares output hashes.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    /// α as `p/q`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
    pub alpha: Rational,
    /// Number of terms P_0 … P_{n-1}.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Recurrence)]
    pub method: MethodArg,
}

#[derive(Args, Debug)]
pub struct EulerArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Recurrence)]
    pub method: MethodArg,
}

#[derive(Args, Debug)]
pub struct PadeArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=10_000))]
    pub n: u32,
    /// Evaluation point as `p/q`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "1")]
    pub z: Rational,
}

#[derive(Args, Debug)]
pub struct EConvergentsArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=10_000))]
    pub n: u32,
}

#[derive(Args, Debug)]
pub struct IntseqArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=100_000))]
    pub k: u32,
}

#[derive(Args, Debug)]
pub struct AsymCheckArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    /// α for `ealpha`, as `p/q`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational, default_value = "1/2")]
    pub alpha: Rational,
    /// One or more comma-separated evaluation points `p/q`.
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_rational)]
    pub z: Vec<Rational>,
    /// Relative tolerance for a pass.
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct GammaDerivArgs {
    /// Evaluation point as `p/q`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
    pub s: Rational,
    #[arg(long, default_value_t = 4)]
    pub order: usize,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// One value per line (`p/q`, integer or decimal), or a CSV table with
    /// `n,numerator,denominator` or `n,value` columns.
    #[arg(long)]
    pub input: PathBuf,
    /// Fit |x_n| (n!)^(1/d) instead of |x_n|.
    #[arg(long)]
    pub factorial: Option<u32>,
    /// Fit |x_n - L| with L the sequence's estimated limit.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1,
          default_value_t = false, default_missing_value = "true")]
    pub against_limit: bool,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// `p/q` or an integer. Decimals are rejected: exact inputs stay exact.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let well_formed = !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '/' | '-' | '+'));
    if !well_formed {
        return Err(format!("`{s}` is not a rational of the form p/q"));
    }
    t.parse::<Rational>()
        .map_err(|_| format!("`{s}` is not a rational of the form p/q"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_rational("-3").unwrap(), -3);
        assert_eq!(parse_rational("6/4").unwrap(), Rational::from((3, 2)));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }
}
