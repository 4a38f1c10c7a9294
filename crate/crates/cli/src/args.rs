use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "qpke", version, about = "Quantum public-key encryption lab: attacks, bounds and figure data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, rank and entropy of the prior density operator per (tau, n).
    Prior,
    /// Data behind one of the five figures.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        id: u8,
    },
    /// Codeword lengths needed for a security parameter.
    Security,
    /// Simulated attack success against the semi-analytic value.
    Montecarlo {
        #[arg(long, value_enum, default_value_t = AttackArg::Bayes)]
        attack: AttackArg,
    },
    /// Every inequality check at its default scale.
    CheckAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttackArg {
    Bayes,
    Symmetry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Parameter ranges shared by every subcommand. Ranges are written as `a`,
/// `a..b` (inclusive) or `a,b,c`.
#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Resolution exponent n (theta = pi / 2^(n-1)).
    #[arg(long = "n", global = true)]
    pub n: Option<String>,
    /// Key length N.
    #[arg(long = "N", global = true)]
    pub key_len: Option<String>,
    /// Measurements per basis T.
    #[arg(long = "T", global = true)]
    pub t: Option<String>,
    /// Codeword length s.
    #[arg(long = "s", global = true)]
    pub s: Option<String>,
    /// Number of copies tau.
    #[arg(long = "tau", global = true)]
    pub tau: Option<String>,
    /// Security parameter, e.g. `0.01`, `2^-5` or `2^-3..2^-10`.
    #[arg(long = "epsilon", global = true)]
    pub epsilon: Option<String>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    pub format: Format,
}

impl SweepArgs {
    pub fn n_or(&self, default: &[u64]) -> Result<Vec<u64>, CliError> {
        range_or("n", self.n.as_deref(), default)
    }

    pub fn t_or(&self, default: &[u64]) -> Result<Vec<u64>, CliError> {
        range_or("T", self.t.as_deref(), default)
    }

    pub fn s_or(&self, default: &[u64]) -> Result<Vec<u64>, CliError> {
        range_or("s", self.s.as_deref(), default)
    }

    pub fn tau_or(&self, default: &[u64]) -> Result<Vec<u64>, CliError> {
        range_or("tau", self.tau.as_deref(), default)
    }

    pub fn key_len_or(&self, default: &[u64]) -> Result<Vec<u64>, CliError> {
        range_or("N", self.key_len.as_deref(), default)
    }

    pub fn epsilon_or(&self, default: &str) -> Result<Vec<f64>, CliError> {
        parse_epsilons(self.epsilon.as_deref().unwrap_or(default))
    }
}

fn range_or(name: &str, raw: Option<&str>, default: &[u64]) -> Result<Vec<u64>, CliError> {
    match raw {
        Some(r) => parse_range(r).map_err(|e| CliError::Usage(format!("--{name}: {e}"))),
        None => Ok(default.to_vec()),
    }
}

pub fn parse_range(raw: &str) -> Result<Vec<u64>, String> {
    let raw = raw.trim();
    if let Some((a, b)) = raw.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (parse_u64(a)?, parse_u64(b)?);
        if a > b {
            return Err(format!("empty range {raw}"));
        }
        return Ok((a..=b).collect());
    }
    raw.split(',').map(parse_u64).collect()
}

fn parse_u64(s: &str) -> Result<u64, String> {
    s.trim().parse().map_err(|_| format!("not a non-negative integer: {s:?}"))
}

/// Accepts plain decimals, `2^-k`, comma lists of either, and `2^-a..2^-b`
/// which expands over every integer exponent in between.
pub fn parse_epsilons(raw: &str) -> Result<Vec<f64>, CliError> {
    let usage = |m: String| CliError::Usage(format!("--epsilon: {m}"));
    if let Some((a, b)) = raw.split_once("..") {
        let (a, b) = (power_of_two_exponent(a).map_err(usage)?, power_of_two_exponent(b).map_err(usage)?);
        let (lo, hi) = (a.min(b), a.max(b));
        let mut out: Vec<f64> = (lo..=hi).map(|e| 2f64.powi(e)).collect();
        if a > b {
            out.reverse();
        }
        return Ok(out);
    }
    raw.split(',').map(|p| parse_epsilon(p).map_err(usage)).collect()
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if s.contains('^') {
        return power_of_two_exponent(s).map(|e| 2f64.powi(e));
    }
    s.parse().map_err(|_| format!("not a number: {s:?}"))
}

fn power_of_two_exponent(s: &str) -> Result<i32, String> {
    let s = s.trim();
    let rest = s.strip_prefix("2^").ok_or_else(|| format!("expected 2^k, got {s:?}"))?;
    rest.trim_matches(|c| c == '(' || c == ')')
        .parse()
        .map_err(|_| format!("bad exponent in {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), vec![3]);
        assert_eq!(parse_range("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_range("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_range("1,4, 9").unwrap(), vec![1, 4, 9]);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("-1").is_err());
        assert!(parse_range("a").is_err());
    }

    #[test]
    fn epsilons() {
        assert_eq!(parse_epsilons("2^-5").unwrap(), vec![1.0 / 32.0]);
        assert_eq!(parse_epsilons("0.5,2^(-1)").unwrap(), vec![0.5, 0.5]);
        let e = parse_epsilons("2^-3..2^-5").unwrap();
        assert_eq!(e, vec![0.125, 0.0625, 0.03125]);
        assert!(parse_epsilons("2^x").is_err());
        assert!(parse_epsilons("3^-1..2^-2").is_err());
    }
}
