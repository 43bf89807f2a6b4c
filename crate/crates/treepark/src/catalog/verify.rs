//! Identity checks on catalog series: differential equations, prime and
//! general composition relations, specializations and integrality.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{normalization, CatalogEntry, GfKind};
use crate::error::{domain, Result};
use crate::families::Family;
use crate::numeric::{big, catalan, factorial, int, to_count};
use crate::series::{BiSeries, Coeff, Poly, RatSeries, Series};

/// One identity, checked coefficient by coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    /// Highest `z`-order compared.
    pub order: usize,
    pub holds: bool,
    pub first_mismatch: Option<usize>,
}

impl IdentityCheck {
    fn series<C: Coeff>(
        label: impl Into<String>,
        lhs: &Series<C>,
        rhs: &Series<C>,
        order: usize,
    ) -> Self {
        let order = order.min(lhs.order()).min(rhs.order());
        let first_mismatch = (0..=order).find(|&n| lhs.coeff(n) != rhs.coeff(n));
        IdentityCheck {
            label: label.into(),
            order,
            holds: first_mismatch.is_none(),
            first_mismatch,
        }
    }

    fn indexed(
        label: impl Into<String>,
        order: usize,
        mut ok: impl FnMut(usize) -> bool,
        from: usize,
    ) -> Self {
        let first_mismatch = (from..=order).find(|&n| !ok(n));
        IdentityCheck {
            label: label.into(),
            order,
            holds: first_mismatch.is_none(),
            first_mismatch,
        }
    }
}

/// The checks of one suite for one family.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub family: Option<Family>,
    pub checks: Vec<IdentityCheck>,
}

impl VerifyReport {
    fn new(suite: &str, family: Option<Family>) -> Self {
        VerifyReport {
            suite: suite.to_string(),
            family,
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

fn combinatorial(family: Family) -> Result<(Family, i64)> {
    let family = family.validate()?;
    match family {
        Family::Ordered | Family::Unordered => Ok((family, 1)),
        Family::DAry(d) | Family::DBundled(d) => Ok((family, d as i64)),
        _ => Err(domain(format!("{family} has no identity of this kind"))),
    }
}

fn k<C: Coeff>(c: i64, order: usize) -> Series<C> {
    Series::constant(C::from_int(c), order)
}

fn univariate(family: Family, kind: GfKind, order: usize) -> Result<RatSeries> {
    CatalogEntry::lookup(family, kind)?.x_series(order)
}

fn bivariate(family: Family, kind: GfKind, order: usize) -> Result<BiSeries> {
    CatalogEntry::lookup(family, kind)?.x_bivariate(order)
}

/// The first-order differential equation for `G`, with `G(0) = 0`.
pub fn verify_ode(family: Family, order: usize) -> Result<VerifyReport> {
    let (family, d) = combinatorial(family)?;
    let full = univariate(family, GfKind::Functions, order + 1)?;
    let gp = full.derivative();
    let g = full.truncate(order);
    let z: RatSeries = Series::var(order);
    let one = k::<BigRational>(1, order);
    let zgp = &z * &gp;
    let (lhs, rhs) = match family {
        Family::Ordered => {
            let a = &one - &g;
            (&gp * &(&a * &a), &(&a + &zgp) * &(&a + &zgp.scale(&int(2))))
        }
        Family::Unordered => {
            let eg = g.exp()?;
            (
                gp.clone(),
                &(&(&z * &eg) * &gp + eg.clone()) * &(&one + &zgp),
            )
        }
        Family::DAry(_) => {
            let a = &one + &g;
            let first = &(&z.scale(&int(d)) * &a.powi(d - 1)?) * &gp;
            (
                gp.clone(),
                &(&first + &a.powi(d)?) * &(&a + &zgp.scale(&int(d - 1))),
            )
        }
        _ => {
            let a = &one - &g;
            let first = &(&z.scale(&int(d)) * &gp) * &a.powi(-(d + 1))?;
            (
                gp.clone(),
                &(&first + &a.powi(-d)?) * &(&a + &zgp.scale(&int(d + 1))),
            )
        }
    };
    let mut report = VerifyReport::new("ode", Some(family));
    report
        .checks
        .push(IdentityCheck::series("G(0) = 0", &g, &Series::zero(0), 0));
    report.checks.push(IdentityCheck::series(
        format!("{family}: ODE residual"),
        &lhs,
        &rhs,
        order,
    ));
    Ok(report)
}

/// The first-order PDE for the leaf-refined `Ǧ(z, v)`, plus `Ǧ(z, 1) = G~` and
/// the one-leaf coefficients.
pub fn verify_pde(family: Family, order: usize) -> Result<VerifyReport> {
    let (family, d) = combinatorial(family)?;
    let full = bivariate(family, GfKind::LeafDistributions, order + 1)?;
    let gv = full.d_second().truncate(order);
    let gz = full.derivative();
    let g = full.truncate(order);
    let z: BiSeries = Series::var(order);
    let one = k::<Poly>(1, order);
    let omv = Series::constant(Poly::one() - Poly::x(), order);
    let zgz = &z * &gz;
    let rhs = match family {
        Family::Ordered => {
            let a = &one - &g;
            let left = &one + &(&gv * &a.powi(-2)?);
            let right = &(&a + &(&omv * &gv)) + &zgz.scale(&Poly::from_int(2));
            &z * &(&left * &right)
        }
        Family::Unordered => {
            let left = &one + &(&g.exp()? * &gv);
            let right = &(&one + &(&omv * &gv)) + &zgz;
            &z * &(&left * &right)
        }
        Family::DAry(_) => {
            let a = &one + &g;
            let left = &one + &(&a.powi(d - 1)? * &gv).scale(&Poly::from_int(d));
            let right = &(&a + &(&omv * &gv).scale(&Poly::from_int(d)))
                + &zgz.scale(&Poly::from_int(d - 1));
            &z * &(&left * &right)
        }
        _ => {
            let a = &one - &g;
            let left = &one + &(&gv * &a.powi(-(d + 1))?).scale(&Poly::from_int(d));
            let right = &(&a + &(&omv * &gv).scale(&Poly::from_int(d)))
                + &zgz.scale(&Poly::from_int(d + 1));
            &z * &(&left * &right)
        }
    };
    let mut report = VerifyReport::new("pde", Some(family));
    report.checks.push(IdentityCheck::series(
        format!("{family}: PDE residual"),
        &gv,
        &rhs,
        order,
    ));
    let gt = univariate(family, GfKind::Distributions, order)?;
    report.checks.push(IdentityCheck::series(
        "G^(z, 1) = G~(z)",
        &g.at(&int(1)),
        &gt,
        order,
    ));
    // chains: n! labellings, w^(n-1) child positions, Catalan many distributions
    let w = family.weight(1);
    report.checks.push(IdentityCheck::indexed(
        "one-leaf coefficient = w^(n-1) Catalan(n)",
        order,
        |n| g.coeff2(n, 1) == num_traits::pow(w.clone(), n - 1) * big(&catalan(n)),
        1,
    ));
    Ok(report)
}

/// Root-core relations between `G` and `P`, and between `G~` and `P~`.
pub fn verify_prime_relation(family: Family, order: usize) -> Result<VerifyReport> {
    let (family, d) = combinatorial(family)?;
    let mut report = VerifyReport::new("prime", Some(family));
    for (gk, pk) in [
        (GfKind::Functions, GfKind::PrimeFunctions),
        (GfKind::Distributions, GfKind::PrimeDistributions),
    ] {
        let g = univariate(family, gk, order)?;
        let p = univariate(family, pk, order)?;
        let z: RatSeries = Series::var(order);
        let one = k::<BigRational>(1, order);
        let (lhs, rhs) = match family {
            Family::Ordered => {
                let a = &one - &g;
                (g.div(&a)?, p.compose(&(&z * &a.powi(-2)?))?)
            }
            Family::Unordered => (g.clone(), p.compose(&(&z * &g.exp()?))?),
            Family::DAry(_) => {
                let a = &one + &g;
                (g.clone(), &a * &p.compose(&(&z * &a.powi(d - 1)?))?)
            }
            _ => {
                let a = &one - &g;
                (g.clone(), &a * &p.compose(&(&z * &a.powi(-(d + 1))?))?)
            }
        };
        report.checks.push(IdentityCheck::series(
            format!("{family}: {} from {}", gk.symbol(), pk.symbol()),
            &lhs,
            &rhs,
            order,
        ));
    }
    Ok(report)
}

/// Root-cluster relations between `F` and `G` (and `F~`, `G~`), with the
/// boundary cases `u = 0` and `m = 0`.
pub fn verify_general_relation(family: Family, order: usize) -> Result<VerifyReport> {
    let (family, d) = combinatorial(family)?;
    let mut report = VerifyReport::new("general", Some(family));
    for (fk, gk) in [
        (GfKind::GeneralFunctions, GfKind::Functions),
        (GfKind::GeneralDistributions, GfKind::Distributions),
    ] {
        let f = bivariate(family, fk, order)?;
        let g_uni = univariate(family, gk, order)?;
        let g = BiSeries::lift(&g_uni);
        let z: BiSeries = Series::var(order);
        let zu = &z * &Series::constant(Poly::x(), order);
        let one = k::<Poly>(1, order);
        let rhs = match family {
            Family::Ordered => {
                let a = &zu * &(&one - &f).recip()?;
                let b = &one - &a;
                &a + &(&b * &g.compose(&(&z * &b.powi(-2)?))?)
            }
            Family::Unordered => {
                let a = &zu * &f.exp()?;
                &a + &g.compose(&(&z * &a.exp()?))?
            }
            Family::DAry(_) => {
                let a = &zu * &(&one + &f).powi(d)?;
                let b = &one + &a;
                &a + &(&b * &g.compose(&(&z * &b.powi(d - 1)?))?)
            }
            _ => {
                let a = &zu * &(&one - &f).powi(-d)?;
                let b = &one - &a;
                &a + &(&b * &g.compose(&(&z * &b.powi(-(d + 1))?))?)
            }
        };
        let (fs, gs) = (fk.symbol(), gk.symbol());
        report.checks.push(IdentityCheck::series(
            format!("{family}: {fs} from {gs}"),
            &f,
            &rhs,
            order,
        ));
        report.checks.push(IdentityCheck::series(
            format!("{fs}(z, 0) = {gs}(z)"),
            &f.at(&BigRational::zero()),
            &g_uni,
            order,
        ));
        report.checks.push(IdentityCheck::indexed(
            format!("{fs}: m = 0 column counts trees"),
            order,
            |n| {
                let v = f.coeff2(n, n) * big(&factorial(n));
                big(&family.tree_count(n).expect("combinatorial")) == v
            },
            1,
        ));
    }
    Ok(report)
}

/// Unary trees give classical parking functions; 1-bundled trees are ordered.
pub fn verify_specializations(order: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("specializations", None);
    let g = univariate(Family::DAry(1), GfKind::Functions, order)?;
    report.checks.push(IdentityCheck::indexed(
        "1-ary G_n = n! (n+1)^(n-1)",
        order,
        |n| {
            let want = factorial(n) * BigUint::from(n + 1).pow(n as u32 - 1);
            to_count(&normalized(&g, GfKind::Functions, n)) == Some(want)
        },
        1,
    ));
    let gt = univariate(Family::DAry(1), GfKind::Distributions, order)?;
    report.checks.push(IdentityCheck::indexed(
        "1-ary G~_n = n! Catalan(n)",
        order,
        |n| to_count(&normalized(&gt, GfKind::Distributions, n)) == Some(factorial(n) * catalan(n)),
        1,
    ));
    for kind in GfKind::UNIVARIATE {
        let a = univariate(Family::DBundled(1), kind, order)?;
        let b = univariate(Family::Ordered, kind, order)?;
        report.checks.push(IdentityCheck::series(
            format!("1-bundled {} = ordered {}", kind.symbol(), kind.symbol()),
            &a,
            &b,
            order,
        ));
    }
    let bi = order.min(10);
    for kind in [
        GfKind::GeneralFunctions,
        GfKind::GeneralDistributions,
        GfKind::LeafDistributions,
    ] {
        let a = bivariate(Family::DBundled(1), kind, bi)?;
        let b = bivariate(Family::Ordered, kind, bi)?;
        report.checks.push(IdentityCheck::series(
            format!("1-bundled {} = ordered {}", kind.symbol(), kind.symbol()),
            &a,
            &b,
            bi,
        ));
    }
    Ok(report)
}

fn normalized(x: &RatSeries, kind: GfKind, n: usize) -> BigRational {
    x.coeff(n) * big(&normalization(kind, n, n))
}

/// Integer `G~_n` for the further families; strict binary trees have odd size.
pub fn verify_further_families(order: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("further-families", None);
    for family in [
        Family::Motzkin,
        Family::UnorderedUnaryBinary,
        Family::Mobile,
        Family::StrictBinary,
    ] {
        let x = univariate(family, GfKind::Distributions, order)?;
        report.checks.push(IdentityCheck::indexed(
            format!("{family}: n! [z^n] G~ is a non-negative integer"),
            order,
            |n| to_count(&normalized(&x, GfKind::Distributions, n)).is_some(),
            1,
        ));
        if family == Family::StrictBinary {
            report.checks.push(IdentityCheck::indexed(
                "strict-binary: G~_n = 0 for even n",
                order,
                |n| n % 2 == 1 || x.coeff(n).is_zero(),
                1,
            ));
        }
    }
    Ok(report)
}

/// Integrality of every normalized coefficient of every catalog row.
pub fn verify_integrality(d: u32, order: usize, bivariate_order: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("integrality", None);
    for entry in CatalogEntry::all(d) {
        let label = format!("{} {}", entry.family, entry.kind);
        if entry.kind.is_bivariate() {
            let x = entry.x_bivariate(bivariate_order)?;
            report.checks.push(IdentityCheck::indexed(
                label,
                bivariate_order,
                |n| {
                    (0..=n).all(|j| {
                        let m = if entry.kind == GfKind::LeafDistributions {
                            j
                        } else {
                            n - j
                        };
                        let v = x.coeff2(n, j) * big(&normalization(entry.kind, n, m));
                        to_count(&v).is_some()
                    })
                },
                1,
            ));
        } else {
            let x = entry.x_series(order)?;
            report.checks.push(IdentityCheck::indexed(
                label,
                order,
                |n| to_count(&normalized(&x, entry.kind, n)).is_some(),
                1,
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_passes(r: VerifyReport) {
        let bad: Vec<_> = r.failures().collect();
        assert!(bad.is_empty(), "{} {:?}: {bad:?}", r.suite, r.family);
    }

    #[test]
    fn odes_hold() {
        for f in [
            Family::Ordered,
            Family::Unordered,
            Family::DAry(3),
            Family::DBundled(2),
        ] {
            assert_passes(verify_ode(f, 12).unwrap());
        }
    }

    #[test]
    fn pdes_hold() {
        for f in [
            Family::Ordered,
            Family::Unordered,
            Family::DAry(2),
            Family::DBundled(2),
        ] {
            assert_passes(verify_pde(f, 6).unwrap());
        }
    }

    #[test]
    fn prime_relations_hold() {
        for f in [
            Family::Ordered,
            Family::Unordered,
            Family::DAry(3),
            Family::DBundled(3),
        ] {
            assert_passes(verify_prime_relation(f, 10).unwrap());
        }
    }

    #[test]
    fn general_relations_hold() {
        for f in [
            Family::Ordered,
            Family::Unordered,
            Family::DAry(2),
            Family::DBundled(2),
        ] {
            assert_passes(verify_general_relation(f, 6).unwrap());
        }
    }

    #[test]
    fn specializations_and_further_families() {
        assert_passes(verify_specializations(8).unwrap());
        assert_passes(verify_further_families(10).unwrap());
    }

    #[test]
    fn broken_identity_is_reported() {
        let a: RatSeries = Series::var(4);
        let b: RatSeries = Series::zero(4);
        let c = IdentityCheck::series("x = 0", &a, &b, 4);
        assert!(!c.holds);
        assert_eq!(c.first_mismatch, Some(1));
        assert!(verify_ode(Family::Motzkin, 3).is_err());
    }
}
