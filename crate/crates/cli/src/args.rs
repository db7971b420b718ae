use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use weilmotive::field::DEFAULT_FIELD_BOUND;
use weilmotive::limits::DEFAULT_MONOMIAL_BOUND;

#[derive(Parser, Debug)]
#[command(
    name = "weilmotive",
    version,
    about = "Exact Frobenius data, Euler factors and motive L-factors for y^e = gamma x^f + delta"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Genus, components and good primes of the curve.
    CurveInfo {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Isotypic components with their index sets and Hodge labels.
    Decompose {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Frobenius cycles and cycle values Z_b over F_q, q = p^r.
    Frobenius {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[command(flatten)]
        select: ComponentSelect,
        #[command(flatten)]
        common: Common,
    },
    /// Zeta numerator at p from point counts.
    Zeta {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        p: u64,
        /// Also compare with the product of the cycle factors.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Euler factor of a component's Jacobian piece at p.
    EulerFactor {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        select: ComponentSelect,
        #[command(flatten)]
        common: Common,
    },
    /// Euler factor of the motive M_{d,d'} for parameters (n, a).
    MotiveFactor {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        select: ComponentSelect,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate the G-invariant monomial classes.
    Invariants {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Check zeta consistency and motive = Hecke = matrix factors.
    Verify {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        primes: PrimeSelect,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Regrouping check for a base of residue degree r.
    GroupingCheck {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        select: ComponentSelect,
        #[command(flatten)]
        common: Common,
    },
    /// Dirichlet coefficients of the incomplete motive L-function.
    Lseries {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        pmax: u64,
        #[arg(long, default_value_t = 50)]
        terms: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    #[arg(long)]
    pub e: u32,
    #[arg(long)]
    pub f: u32,
    #[arg(long, default_value = "1", value_parser = parse_rational, allow_hyphen_values = true)]
    pub gamma: BigRational,
    #[arg(long, default_value = "1", value_parser = parse_rational, allow_hyphen_values = true)]
    pub delta: BigRational,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ParamArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub a: u32,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ComponentSelect {
    #[arg(long, requires = "dprime")]
    pub d: Option<u32>,
    #[arg(long, requires = "d")]
    pub dprime: Option<u32>,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
pub struct PrimeSelect {
    #[arg(long)]
    pub p: Option<u64>,
    /// Every good prime up to this bound.
    #[arg(long)]
    pub pmax: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Newline-delimited JSON cache of point counts, cycle values and zeta numerators.
    #[arg(long, env = "WEILMOTIVE_CACHE")]
    pub cache: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Largest finite field that may be enumerated.
    #[arg(long, default_value_t = DEFAULT_FIELD_BOUND)]
    pub bound: u64,
    /// Largest number of monomials the invariant search may visit.
    #[arg(long, default_value_t = DEFAULT_MONOMIAL_BOUND)]
    pub monomial_bound: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: num_bigint::BigInt = num
        .parse()
        .map_err(|_| format!("not a rational number: {s}"))?;
    let den: num_bigint::BigInt = den
        .parse()
        .map_err(|_| format!("not a rational number: {s}"))?;
    if den == 0.into() {
        return Err(format!("zero denominator in {s}"));
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational("3/6").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            parse_rational("-2").unwrap(),
            BigRational::from_integer((-2).into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
