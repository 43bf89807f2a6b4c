//! Generating-function solutions and their conversion to integer counts.
//!
//! Each [`CatalogEntry`] writes a generating function `X` as an expression in an
//! auxiliary series `Q`, where `Q = z·φ(Q)` or, for a few rows, `Q` solves a more
//! general implicit equation. Bivariate entries use the expression variable `u`
//! for the second variable (`u` marks free nodes, `v` marks leaves).

mod verify;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::families::Family;
use crate::kind::CountKind;
use crate::numeric::{big, factorial, rat, to_count};
use crate::series::{solve_fixed_point, solve_implicit, BiSeries, Expr, Poly, RatSeries, Series};

pub use verify::{
    verify_further_families, verify_general_relation, verify_integrality, verify_ode, verify_pde,
    verify_prime_relation, verify_specializations, IdentityCheck, VerifyReport,
};

/// Which generating function an entry describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GfKind {
    /// `G`, double-exponential.
    Functions,
    /// `P`, double-exponential.
    PrimeFunctions,
    /// `G~`, exponential.
    Distributions,
    /// `P~`, exponential.
    PrimeDistributions,
    /// `F(z, u)`, `u` marking free nodes.
    GeneralFunctions,
    /// `F~(z, u)`.
    GeneralDistributions,
    /// `Ǧ(z, v)`, `v` marking leaves.
    LeafDistributions,
}

impl GfKind {
    pub const ALL: [GfKind; 7] = [
        GfKind::Functions,
        GfKind::PrimeFunctions,
        GfKind::Distributions,
        GfKind::PrimeDistributions,
        GfKind::GeneralFunctions,
        GfKind::GeneralDistributions,
        GfKind::LeafDistributions,
    ];

    pub const UNIVARIATE: [GfKind; 4] = [
        GfKind::Functions,
        GfKind::PrimeFunctions,
        GfKind::Distributions,
        GfKind::PrimeDistributions,
    ];

    pub fn is_bivariate(self) -> bool {
        matches!(
            self,
            GfKind::GeneralFunctions | GfKind::GeneralDistributions | GfKind::LeafDistributions
        )
    }

    pub fn is_distribution(self) -> bool {
        !matches!(
            self,
            GfKind::Functions | GfKind::PrimeFunctions | GfKind::GeneralFunctions
        )
    }

    pub fn symbol(self) -> &'static str {
        match self {
            GfKind::Functions => "G",
            GfKind::PrimeFunctions => "P",
            GfKind::Distributions => "G~",
            GfKind::PrimeDistributions => "P~",
            GfKind::GeneralFunctions => "F",
            GfKind::GeneralDistributions => "F~",
            GfKind::LeafDistributions => "G^",
        }
    }
}

impl From<CountKind> for GfKind {
    fn from(k: CountKind) -> GfKind {
        match k {
            CountKind::Functions => GfKind::Functions,
            CountKind::PrimeFunctions => GfKind::PrimeFunctions,
            CountKind::Distributions => GfKind::Distributions,
            CountKind::PrimeDistributions => GfKind::PrimeDistributions,
            CountKind::GeneralFunctions(_) => GfKind::GeneralFunctions,
            CountKind::GeneralDistributions(_) => GfKind::GeneralDistributions,
        }
    }
}

impl fmt::Display for GfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GfKind::Functions => "functions",
            GfKind::PrimeFunctions => "prime-functions",
            GfKind::Distributions => "distributions",
            GfKind::PrimeDistributions => "prime-distributions",
            GfKind::GeneralFunctions => "general-functions",
            GfKind::GeneralDistributions => "general-distributions",
            GfKind::LeafDistributions => "leaf-distributions",
        })
    }
}

impl FromStr for GfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        GfKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s || k.symbol().eq_ignore_ascii_case(&s))
            .ok_or_else(|| domain(format!("unknown generating function kind {s:?}")))
    }
}

/// How the auxiliary series `Q` is determined.
#[derive(Clone, Debug, PartialEq)]
pub enum Auxiliary {
    /// `Q = z·φ(Q)`.
    FixedPoint(Expr),
    /// `Q = rhs(z, Q)`.
    Implicit(Expr),
}

/// One row of the generating-function tables.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub family: Family,
    pub kind: GfKind,
    /// `X` in terms of `Q` (and `u`, `z` where needed).
    pub x: Expr,
    pub aux: Auxiliary,
}

fn q() -> Expr {
    Expr::q()
}

fn u() -> Expr {
    Expr::u()
}

fn z() -> Expr {
    Expr::z()
}

fn c(a: i64, b: i64) -> Expr {
    Expr::rat(a, b)
}

fn e(x: Expr, a: i64, b: i64) -> Expr {
    x.pow(rat(a, b))
}

impl CatalogEntry {
    /// The entry for `(family, kind)`.
    pub fn lookup(family: Family, kind: GfKind) -> Result<CatalogEntry> {
        let family = family.validate()?;
        let missing = || Error::NotInCatalog {
            family: family.to_string(),
            kind: kind.to_string(),
        };
        let (x, aux) = match family {
            Family::Ordered => ordered(kind),
            Family::Unordered => unordered(kind),
            Family::DAry(d) => dary(kind, d as i64),
            Family::DBundled(d) => dbundled(kind, d as i64),
            _ if kind == GfKind::Distributions => further(family).ok_or_else(missing)?,
            _ => return Err(missing()),
        };
        Ok(CatalogEntry {
            family,
            kind,
            x,
            aux,
        })
    }

    /// Every catalog row, with `d` substituted in the parameterized families.
    pub fn all(d: u32) -> Vec<CatalogEntry> {
        let families = [
            Family::Ordered,
            Family::Unordered,
            Family::DAry(d),
            Family::DBundled(d),
        ];
        let mut out: Vec<CatalogEntry> = families
            .into_iter()
            .flat_map(|f| GfKind::ALL.into_iter().map(move |k| (f, k)))
            .map(|(f, k)| CatalogEntry::lookup(f, k).expect("combinatorial row"))
            .collect();
        for f in [
            Family::Motzkin,
            Family::UnorderedUnaryBinary,
            Family::Mobile,
            Family::StrictBinary,
        ] {
            out.push(CatalogEntry::lookup(f, GfKind::Distributions).expect("further row"));
        }
        out
    }

    /// `φ` when `Q` is given by `Q = z·φ(Q)`.
    pub fn phi(&self) -> Option<&Expr> {
        match &self.aux {
            Auxiliary::FixedPoint(phi) => Some(phi),
            Auxiliary::Implicit(_) => None,
        }
    }

    fn solve<C: crate::series::Coeff>(&self, order: usize, u: Option<&C>) -> Result<Series<C>> {
        Ok(match &self.aux {
            Auxiliary::FixedPoint(phi) => solve_fixed_point(phi, order, u)?,
            Auxiliary::Implicit(rhs) => solve_implicit(rhs, order, u)?,
        })
    }

    fn eval<C: crate::series::Coeff>(&self, order: usize, u: Option<C>) -> Result<Series<C>> {
        let q = self.solve(order, u.as_ref())?;
        let mut env = crate::series::Env::with_q(q);
        env.u = u;
        Ok(self.x.eval(&env)?)
    }

    /// `Q` and `X` as exact univariate series.
    pub fn q_series(&self, order: usize) -> Result<RatSeries> {
        self.univariate()?;
        self.solve(order, None)
    }

    /// `X` to order at least `order`.
    pub fn x_series(&self, order: usize) -> Result<RatSeries> {
        self.univariate()?;
        let x = self.eval::<BigRational>(order + 1, None)?;
        Ok(x.truncate(order))
    }

    /// `X(z, u)` (or `X(z, v)`) to order at least `order` in `z`.
    pub fn x_bivariate(&self, order: usize) -> Result<BiSeries> {
        if !self.kind.is_bivariate() {
            return Err(domain(format!("{} is univariate", self.kind)));
        }
        let x = self.eval::<Poly>(order + 1, Some(Poly::x()))?;
        Ok(x.truncate(order))
    }

    /// `X` evaluated over an arbitrary coefficient ring at order `order`.
    pub fn x_in<C: crate::series::Coeff>(&self, order: usize, u: Option<C>) -> Result<Series<C>> {
        self.eval(order, u)
    }

    fn univariate(&self) -> Result<()> {
        if self.kind.is_bivariate() {
            Err(domain(format!("{} is bivariate", self.kind)))
        } else {
            Ok(())
        }
    }
}

fn ordered(kind: GfKind) -> (Expr, Auxiliary) {
    use Auxiliary::*;
    match kind {
        GfKind::Functions => (
            1 - ((1 - q()) * (1 + q()) * q().exp()).recip(),
            FixedPoint((1 + q()).powi(2) * q().exp()),
        ),
        GfKind::PrimeFunctions => (
            (1 + q()) * (1 - q()) * q().exp() - 1,
            FixedPoint(((1 - q()).powi(2) * q().exp()).recip()),
        ),
        GfKind::Distributions => (
            1 - ((1 + q()).powi(2) * (1 - q())).recip(),
            FixedPoint((1 + q()).powi(4)),
        ),
        GfKind::PrimeDistributions => (
            (1 + q()).powi(2) * (1 - q()) - 1,
            FixedPoint((1 - q()).powi(-2)),
        ),
        GfKind::GeneralFunctions => {
            let b = 1 + q() + u() * q() * (1 - q());
            (
                1 - ((1 - q()) * b.clone() * q().exp()).recip(),
                FixedPoint(b.powi(2) * q().exp()),
            )
        }
        GfKind::GeneralDistributions => {
            let b = (1 + q()).powi(2) + u() * q() * (1 - q());
            (1 - ((1 - q()) * b.clone()).recip(), FixedPoint(b.powi(2)))
        }
        GfKind::LeafDistributions => {
            let w = u() - 1;
            let k = 1 - z() * w.clone() * (1 + q()).powi(2);
            (
                1 - k.clone().powi(2)
                    / ((1 + q()).powi(2) * (1 - q() - z() * w * (1 + q()).powi(2))),
                Implicit(z() * (1 + q()).powi(4) * k.powi(-2)),
            )
        }
    }
}

fn unordered(kind: GfKind) -> (Expr, Auxiliary) {
    use Auxiliary::*;
    let dist = || q() + (1 + q()).ln() + (1 - q()).ln();
    match kind {
        GfKind::Functions => (2 * q() + (1 - q()).ln(), FixedPoint((2 * q()).exp())),
        GfKind::PrimeFunctions => (2 * q() + (1 - q()).ln(), FixedPoint((1 - q()).recip())),
        GfKind::Distributions => (dist(), FixedPoint((1 + q()).powi(2) * q().exp())),
        GfKind::PrimeDistributions => (dist(), FixedPoint((1 + q()) / (1 - q()))),
        GfKind::GeneralFunctions => {
            let ex = q() * (2 + u() * (1 - q()));
            ((1 - q()).ln() + ex.clone(), FixedPoint(ex.exp()))
        }
        GfKind::GeneralDistributions => {
            let t = u() * q() * (1 - q()) / (1 + q());
            (
                dist() + t,
                FixedPoint((1 + q()).powi(2) * (q() * (1 + u() * (1 - q()) / (1 + q()))).exp()),
            )
        }
        GfKind::LeafDistributions => {
            let w = u() - 1;
            let ex = (q() + w.clone() * z() * (1 + q()).powi(2)).exp();
            (
                ((1 - q()) * (1 + q()) * ex.clone() - w * q().powi(2)).ln(),
                Implicit(z() * (1 + q()).powi(2) * ex),
            )
        }
    }
}

fn dary(kind: GfKind, d: i64) -> (Expr, Auxiliary) {
    use Auxiliary::*;
    let root_dq = || e(1 - d * q(), 1, d);
    let root_sq = || e(1 - q().powi(2), 1, d);
    match kind {
        GfKind::Functions => (
            root_dq() * q().exp() / (1 - q()) - 1,
            FixedPoint((d * q()).exp() * (1 - q()).powi(-(d - 1))),
        ),
        GfKind::PrimeFunctions => (
            1 - (1 - q()) / (root_dq() * q().exp()),
            FixedPoint(q().exp() * e(1 - d * q(), -(d - 1), d)),
        ),
        GfKind::Distributions => (
            root_sq() / (1 - c(1, d) * q()) - 1,
            FixedPoint(d * (1 + q()).powi(2) * (1 - c(1, d) * q()).powi(-(d - 1))),
        ),
        GfKind::PrimeDistributions => (
            1 - (1 - c(1, d) * q()) / root_sq(),
            FixedPoint(d * e(1 + q(), d + 1, d) * e(1 - q(), -(d - 1), d)),
        ),
        GfKind::GeneralFunctions => {
            let den = 1 - q() - u() * q() * (1 - d * q());
            (
                root_dq() * q().exp() / den.clone() - 1,
                FixedPoint((d * q()).exp() * den.powi(-(d - 1))),
            )
        }
        GfKind::GeneralDistributions => {
            let den = 1 - c(1, d) * q() - c(1, d) * u() * q() * (1 - q()) / (1 + q());
            (
                e(1 + q(), 1, d) * e(1 - q(), 1, d) / den.clone() - 1,
                FixedPoint(d * (1 + q()).powi(2) * den.powi(-(d - 1))),
            )
        }
        GfKind::LeafDistributions => {
            let w = u() - 1;
            let m = 1 + w.clone() * z() * (1 + q()).powi(2);
            (
                e(1 + q(), 1, d)
                    * e(1 - q() + w * z() * (1 + q()) * (1 - d * q()), 1, d)
                    * e(m.clone(), d - 1, d)
                    / (1 - c(1, d) * q())
                    - 1,
                Implicit(
                    d * z()
                        * (1 + q()).powi(2)
                        * m.powi(d - 1)
                        * (1 - c(1, d) * q()).powi(-(d - 1)),
                ),
            )
        }
    }
}

fn dbundled(kind: GfKind, d: i64) -> (Expr, Auxiliary) {
    use Auxiliary::*;
    let root_dq = || e(1 - d * q(), 1, d);
    let root_sq = || e(1 - q().powi(2), 1, d);
    match kind {
        GfKind::Functions => (
            1 - (root_dq() * (1 + q()) * q().exp()).recip(),
            FixedPoint((1 + q()).powi(d + 1) * (d * q()).exp()),
        ),
        GfKind::PrimeFunctions => (
            root_dq() * (1 + q()) * q().exp() - 1,
            FixedPoint((e(1 - d * q(), d + 1, d) * q().exp()).recip()),
        ),
        GfKind::Distributions => (
            1 - ((1 + c(1, d) * q()) * root_sq()).recip(),
            FixedPoint(d * (1 + q()).powi(2) * (1 + c(1, d) * q()).powi(d + 1)),
        ),
        GfKind::PrimeDistributions => (
            (1 + c(1, d) * q()) * root_sq() - 1,
            FixedPoint(d * e(1 + q(), d - 1, d) * e(1 - q(), -(d + 1), d)),
        ),
        GfKind::GeneralFunctions => {
            let b = 1 + q() + u() * q() * (1 - d * q());
            (
                1 - (root_dq() * b.clone() * q().exp()).recip(),
                FixedPoint(b.powi(d + 1) * (d * q()).exp()),
            )
        }
        GfKind::GeneralDistributions => {
            let b = 1 + c(1, d) * q() + c(1, d) * u() * q() * (1 - q()) / (1 + q());
            (
                1 - (e(1 + q(), 1, d) * e(1 - q(), 1, d) * b.clone()).recip(),
                FixedPoint(d * (1 + q()).powi(2) * b.powi(d + 1)),
            )
        }
        GfKind::LeafDistributions => {
            let w = u() - 1;
            let m = 1 - w.clone() * z() * (1 + q()).powi(2);
            (
                1 - e(m.clone(), d + 1, d)
                    / ((1 + c(1, d) * q())
                        * e(1 + q(), 1, d)
                        * e(1 - q() - w * z() * (1 + q()) * (1 + d * q()), 1, d)),
                Implicit(
                    d * z()
                        * (1 + q()).powi(2)
                        * (1 + c(1, d) * q()).powi(d + 1)
                        * m.powi(-(d + 1)),
                ),
            )
        }
    }
}

fn further(family: Family) -> Option<(Expr, Auxiliary)> {
    use Auxiliary::*;
    Some(match family {
        Family::Motzkin => {
            let den = 1 + q() + q().powi(2);
            (
                ((1 + 2 * q()) * ((1 + q() - 3 * q().powi(2)) / den.clone()).sqrt() - 1) * c(1, 2),
                FixedPoint((1 + 2 * q() + 3 * q().powi(2)).powi(2) / den),
            )
        }
        Family::UnorderedUnaryBinary => {
            let den = 1 + q() + c(1, 2) * q().powi(2);
            (
                (1 + q()) * ((1 + q() - c(3, 2) * q().powi(2)) / den.clone()).sqrt() - 1,
                FixedPoint((1 + 2 * q() + c(3, 2) * q().powi(2)).powi(2) / den),
            )
        }
        Family::Mobile => {
            let l = 1 + (1 + q()).ln();
            (
                1 - (q().powi(2) / l.clone()).exp() / (1 + q()),
                FixedPoint((1 + q()) * (1 + q() + (1 + q()).ln()).powi(2) / l),
            )
        }
        Family::StrictBinary => (
            (q() * (1 - 2 * q()) / (2 - q())).sqrt(),
            Implicit(4 * z().powi(2) * (1 + q()).powi(4) / (2 - q())),
        ),
        _ => return None,
    })
}

/// Normalization factor turning `[z^n u^k]X` into a count.
fn normalization(kind: GfKind, n: usize, m: usize) -> BigUint {
    match kind {
        GfKind::Functions | GfKind::PrimeFunctions => factorial(n).pow(2),
        GfKind::GeneralFunctions => factorial(n) * factorial(m),
        _ => factorial(n),
    }
}

fn integral(family: Family, kind: GfKind, n: usize, value: BigRational) -> Result<BigUint> {
    to_count(&value).ok_or_else(|| {
        Error::Integrity(format!(
            "{family} {kind}: normalized coefficient at n = {n} is {value}, not a non-negative integer"
        ))
    })
}

/// Counts for `n = 1..=n_max` from a univariate entry; index 0 holds `n = 1`.
pub fn series_counts(family: Family, kind: GfKind, n_max: usize) -> Result<Vec<BigUint>> {
    let entry = CatalogEntry::lookup(family, kind)?;
    let x = entry.x_series(n_max)?;
    (1..=n_max)
        .map(|n| {
            let v = x.coeff(n) * big(&normalization(kind, n, n));
            integral(family, kind, n, v)
        })
        .collect()
}

/// `table[n - 1][m]` for `m = 0..=n`: general counts from `F` or `F~`.
pub fn general_table(
    family: Family,
    distributions: bool,
    n_max: usize,
) -> Result<Vec<Vec<BigUint>>> {
    let kind = if distributions {
        GfKind::GeneralDistributions
    } else {
        GfKind::GeneralFunctions
    };
    let x = CatalogEntry::lookup(family, kind)?.x_bivariate(n_max)?;
    (1..=n_max)
        .map(|n| {
            (0..=n)
                .map(|m| {
                    let v = x.coeff2(n, n - m) * big(&normalization(kind, n, m));
                    integral(family, kind, n, v)
                })
                .collect()
        })
        .collect()
}

/// `table[n - 1][k]` for `k = 0..=n`: distributions on trees with `k` leaves.
pub fn leaf_table(family: Family, n_max: usize) -> Result<Vec<Vec<BigUint>>> {
    let kind = GfKind::LeafDistributions;
    let x = CatalogEntry::lookup(family, kind)?.x_bivariate(n_max)?;
    (1..=n_max)
        .map(|n| {
            (0..=n)
                .map(|k| {
                    integral(
                        family,
                        kind,
                        n,
                        x.coeff2(n, k) * big(&normalization(kind, n, k)),
                    )
                })
                .collect()
        })
        .collect()
}

/// A single count from the series route.
pub fn count(family: Family, kind: CountKind, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    kind.check(n)?;
    match kind.general_m() {
        Some(m) => Ok(general_table(family, kind.is_distribution(), n)?[n - 1][m].clone()),
        None => Ok(series_counts(family, kind.into(), n)?[n - 1].clone()),
    }
}

/// `n!·[z^n]X` or `(n!)²·[z^n]X` as an exact rational, without the integrality check.
pub fn normalized_coefficient(x: &RatSeries, kind: GfKind, n: usize) -> BigRational {
    x.coeff(n) * big(&normalization(kind, n, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::catalan;

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&k| BigUint::from(k)).collect()
    }

    #[test]
    fn ordered_anchor_values() {
        assert_eq!(
            series_counts(Family::Ordered, GfKind::Functions, 3).unwrap(),
            nums(&[1, 6, 168])
        );
        assert_eq!(
            series_counts(Family::Ordered, GfKind::PrimeFunctions, 3).unwrap(),
            nums(&[1, 2, 24])
        );
        assert_eq!(
            series_counts(Family::Ordered, GfKind::Distributions, 3).unwrap(),
            nums(&[1, 4, 48])
        );
        assert_eq!(
            series_counts(Family::Ordered, GfKind::PrimeDistributions, 3).unwrap(),
            nums(&[1, 2, 12])
        );
    }

    #[test]
    fn unordered_prime_functions_are_factorials() {
        let got = series_counts(Family::Unordered, GfKind::PrimeFunctions, 8).unwrap();
        for (i, v) in got.iter().enumerate() {
            assert_eq!(v, &factorial(2 * i));
        }
    }

    #[test]
    fn unary_chains() {
        let g = series_counts(Family::DAry(1), GfKind::Functions, 6).unwrap();
        let gt = series_counts(Family::DAry(1), GfKind::Distributions, 6).unwrap();
        for n in 1..=6 {
            assert_eq!(
                g[n - 1],
                factorial(n) * BigUint::from(n + 1).pow(n as u32 - 1)
            );
            assert_eq!(gt[n - 1], factorial(n) * catalan(n));
        }
    }

    #[test]
    fn general_boundaries() {
        let t = general_table(Family::Ordered, true, 4).unwrap();
        assert_eq!(t[2][1], BigUint::from(36u32));
        for (i, row) in t.iter().enumerate() {
            let n = i + 1;
            assert_eq!(row[0], Family::Ordered.tree_count(n).unwrap());
        }
        let f = general_table(Family::Unordered, false, 3).unwrap();
        assert_eq!(f[1][1], BigUint::from(4u32));
        assert_eq!(f[2][3], BigUint::from(132u32));
    }

    #[test]
    fn leaf_refinement_sums_to_total() {
        let t = leaf_table(Family::Ordered, 5).unwrap();
        let g = series_counts(Family::Ordered, GfKind::Distributions, 5).unwrap();
        for n in 1..=5 {
            let total: BigUint = t[n - 1].iter().sum();
            assert_eq!(total, g[n - 1]);
            assert_eq!(t[n - 1][1], factorial(n) * catalan(n));
        }
    }

    #[test]
    fn strict_binary_vanishes_on_even_sizes() {
        let g = series_counts(Family::StrictBinary, GfKind::Distributions, 7).unwrap();
        assert!(g
            .iter()
            .skip(1)
            .step_by(2)
            .all(|v| v == &BigUint::from(0u32)));
        assert_eq!(g[0], BigUint::from(1u32));
    }

    #[test]
    fn unknown_rows_are_reported() {
        assert!(matches!(
            CatalogEntry::lookup(Family::Motzkin, GfKind::Functions),
            Err(Error::NotInCatalog { .. })
        ));
        assert_eq!(CatalogEntry::all(2).len(), 32);
    }
}
