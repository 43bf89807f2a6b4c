use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treepark::catalog::GfKind;
use treepark::closed_forms::FormulaId;
use treepark::families::Family;
use treepark::kind::CountKind;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "treepark",
    version,
    about = "Exact counts, generating functions and asymptotics of parking functions on trees"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count parking functions or distributions for a range of tree sizes.
    Enumerate(EnumerateArgs),
    /// Count general parking functions or distributions with m ≤ n drivers.
    General(GeneralArgs),
    /// Coefficients and counts of a catalog generating function.
    Series(SeriesArgs),
    /// Evaluate an explicit formula.
    Closed(ClosedArgs),
    /// Singularity, growth rate and constant of a univariate generating function.
    Asym(AsymArgs),
    /// Limit success probability at load α, optionally against an exact size-n value.
    Phase(PhaseArgs),
    /// Run identity suites; exits 1 on any failed check.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
    Bfile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Method {
    Brute,
    Series,
    Closed,
    All,
}

impl Method {
    pub fn expand(self) -> Vec<Method> {
        match self {
            Method::All => vec![Method::Brute, Method::Series, Method::Closed],
            m => vec![m],
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Series => "series",
            Method::Closed => "closed",
            Method::All => "all",
        })
    }
}

/// Functions or distributions, for commands where the general kind is implied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Outcome {
    Functions,
    Distributions,
}

impl Outcome {
    pub fn distributions(self) -> bool {
        self == Outcome::Distributions
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ode,
    Pde,
    Prime,
    General,
    Threeway,
    Specializations,
    FurtherFamilies,
    Integrality,
    All,
}

/// `N`, `A..B` or `A..=B`; both ends inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeRange {
    pub lo: usize,
    pub hi: usize,
}

impl SizeRange {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad size {t:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(SizeRange { lo, hi })
    }
}

fn parse_kind(s: &str) -> Result<CountKind, String> {
    s.parse().map_err(|e: treepark::error::Error| e.to_string())
}

fn parse_gf(s: &str) -> Result<GfKind, String> {
    s.parse().map_err(|e: treepark::error::Error| e.to_string())
}

fn parse_formula(s: &str) -> Result<FormulaId, String> {
    s.parse().map_err(|e: treepark::error::Error| {
        let names: Vec<&str> = FormulaId::ALL.iter().map(|f| f.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

#[derive(Clone, Debug, Args)]
pub struct FamilyArg {
    /// ordered, unordered, binary, dary-D, dbundled-D, motzkin, strict-binary, unary-binary or mobile.
    #[arg(long)]
    pub family: String,
    /// Arity for `--family dary` or `--family dbundled`.
    #[arg(long)]
    pub d: Option<u32>,
}

impl FamilyArg {
    pub fn resolve(&self) -> Result<Family, CliError> {
        let name = self.family.trim().to_ascii_lowercase();
        let family = match self.d {
            Some(d) if name == "dary" || name == "dbundled" => format!("{name}-{d}").parse(),
            None if name == "dary" || name == "dbundled" => {
                return Err(CliError::Usage(format!("--family {name} needs --d")))
            }
            _ => name.parse::<Family>(),
        }
        .map_err(|e| CliError::Usage(e.to_string()))?;
        match (self.d, family) {
            (None, _) => Ok(family),
            (Some(d), Family::DAry(e) | Family::DBundled(e)) if d == e => Ok(family),
            (Some(d), _) => Err(CliError::Usage(format!(
                "--d {d} does not apply to family {family}"
            ))),
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct Workload {
    /// Worker threads for brute-force counting.
    #[arg(long, env = "TREEPARK_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
    /// Cap on brute-force predicate evaluations.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_evaluations: Option<u64>,
}

#[derive(Clone, Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    /// functions, prime-functions, distributions, prime-distributions,
    /// general-functions:M or general-distributions:M.
    #[arg(long, value_parser = parse_kind)]
    pub kind: CountKind,
    /// Tree size or inclusive range such as 1..8.
    #[arg(long, default_value = "1..6")]
    pub n: SizeRange,
    #[arg(long, value_enum, default_value_t = Method::Series)]
    pub method: Method,
    #[command(flatten)]
    pub workload: Workload,
}

#[derive(Clone, Debug, Args)]
pub struct GeneralArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value_t = Outcome::Functions)]
    pub kind: Outcome,
    #[arg(long, default_value = "1..5")]
    pub n: SizeRange,
    /// Number of drivers; every 0 ≤ m ≤ n when omitted.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Series)]
    pub method: Method,
    #[command(flatten)]
    pub workload: Workload,
}

#[derive(Clone, Debug, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    /// functions, prime-functions, distributions, prime-distributions,
    /// general-functions, general-distributions or leaf-distributions.
    #[arg(long, value_parser = parse_gf)]
    pub kind: GfKind,
    /// Truncation order in z.
    #[arg(long, default_value_t = 10)]
    pub order: usize,
}

#[derive(Clone, Debug, Args)]
pub struct ClosedArgs {
    /// Formula name, for example ordered-g, binary-p~ or unordered-f.
    #[arg(long, value_parser = parse_formula)]
    pub formula: FormulaId,
    #[arg(long, default_value = "1..8")]
    pub n: SizeRange,
    /// Number of drivers for two-parameter formulas; every 0 ≤ m ≤ n when omitted.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct AsymArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    #[arg(long, value_parser = parse_gf)]
    pub kind: GfKind,
    /// Significant digits for τ, ρ and C.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(5..=500))]
    pub digits: u32,
    /// Also run a ratio ladder up to this n.
    #[arg(long)]
    pub ladder: Option<usize>,
    /// Relative tolerance for the ladder.
    #[arg(long, default_value_t = 0.10)]
    pub tolerance: f64,
}

#[derive(Clone, Debug, Args)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value_t = Outcome::Functions)]
    pub kind: Outcome,
    /// Loads α = m/n, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    /// Compare with the exact probability at this size.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Univariate truncation order.
    #[arg(long, default_value_t = 25)]
    pub order: usize,
    /// Bivariate truncation order.
    #[arg(long, default_value_t = 12)]
    pub bivariate_order: usize,
    /// Restrict family-wise suites to one family.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub d: Option<u32>,
    #[command(flatten)]
    pub workload: Workload,
}

impl VerifyArgs {
    pub fn family(&self) -> Result<Option<Family>, CliError> {
        self.family
            .as_ref()
            .map(|f| {
                FamilyArg {
                    family: f.clone(),
                    d: self.d,
                }
                .resolve()
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_ranges() {
        assert_eq!(
            "4".parse::<SizeRange>().unwrap(),
            SizeRange { lo: 4, hi: 4 }
        );
        assert_eq!(
            "1..8".parse::<SizeRange>().unwrap(),
            SizeRange { lo: 1, hi: 8 }
        );
        assert_eq!(
            "2..=3".parse::<SizeRange>().unwrap(),
            SizeRange { lo: 2, hi: 3 }
        );
        assert!("5..2".parse::<SizeRange>().is_err());
        assert!("x".parse::<SizeRange>().is_err());
    }

    #[test]
    fn family_with_arity() {
        let f = |family: &str, d| {
            FamilyArg {
                family: family.into(),
                d,
            }
            .resolve()
        };
        assert_eq!(f("dary", Some(3)).unwrap(), Family::DAry(3));
        assert_eq!(f("binary", Some(2)).unwrap(), Family::DAry(2));
        assert_eq!(f("dbundled-4", None).unwrap(), Family::DBundled(4));
        assert!(f("dary", None).is_err());
        assert!(f("ordered", Some(2)).is_err());
        assert!(f("dary-3", Some(2)).is_err());
        assert!(f("trees", None).is_err());
    }
}
