//! Closed-form radicals for `τ`, `ρ` and `C`, written out per family.
//!
//! These are evaluated independently of the singularity solver and serve as
//! its cross-check. The binary row is listed separately from the `d`-ary row
//! because the generic distribution formulas for `τ` degenerate at `d = 2`.

use std::fmt;

use serde::Serialize;

use super::real::Real;
use crate::catalog::GfKind;
use crate::families::Family;

/// A row of the tabulated constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TabulatedRow {
    Ordered,
    Unordered,
    /// Binary trees, i.e. `d`-ary with `d = 2`, from their own formulas.
    Binary,
    DAry(u32),
    DBundled(u32),
}

impl TabulatedRow {
    pub fn family(self) -> Family {
        match self {
            TabulatedRow::Ordered => Family::Ordered,
            TabulatedRow::Unordered => Family::Unordered,
            TabulatedRow::Binary => Family::DAry(2),
            TabulatedRow::DAry(d) => Family::DAry(d),
            TabulatedRow::DBundled(d) => Family::DBundled(d),
        }
    }

    /// The preferred row for a family: binary trees use the binary row.
    pub fn for_family(family: Family) -> Option<TabulatedRow> {
        Some(match family {
            Family::Ordered => TabulatedRow::Ordered,
            Family::Unordered => TabulatedRow::Unordered,
            Family::DAry(2) => TabulatedRow::Binary,
            Family::DAry(d) if d >= 2 => TabulatedRow::DAry(d),
            Family::DBundled(d) if d >= 1 => TabulatedRow::DBundled(d),
            _ => return None,
        })
    }

    /// Every row checked for parameters `d ∈ ds`.
    pub fn rows(ds: &[u32]) -> Vec<TabulatedRow> {
        let mut rows = vec![
            TabulatedRow::Ordered,
            TabulatedRow::Unordered,
            TabulatedRow::Binary,
        ];
        rows.extend(ds.iter().map(|&d| TabulatedRow::DAry(d)));
        rows.extend(ds.iter().map(|&d| TabulatedRow::DBundled(d)));
        rows
    }
}

impl fmt::Display for TabulatedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TabulatedRow::Ordered => write!(f, "ordered"),
            TabulatedRow::Unordered => write!(f, "unordered"),
            TabulatedRow::Binary => write!(f, "binary"),
            TabulatedRow::DAry(d) => write!(f, "{d}-ary"),
            TabulatedRow::DBundled(d) => write!(f, "{d}-bundled"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Tabulated {
    pub tau: Real,
    pub rho: Real,
    pub c: Real,
}

fn n(k: i64) -> Real {
    Real::from_i64(k)
}

fn r(a: i64, b: i64) -> Real {
    Real::ratio(a, b)
}

fn sqrt(x: Real) -> Real {
    x.sqrt()
}

fn exp(x: Real) -> Real {
    x.exp()
}

fn sqrt_pi() -> Real {
    Real::pi().sqrt()
}

/// Tabulated `(τ, ρ, C)`, or `None` when the row has no entry for `kind`
/// (bivariate kinds, or a generic formula that degenerates).
pub fn tabulated(kind: GfKind, row: TabulatedRow) -> Option<Tabulated> {
    match kind {
        GfKind::Functions => Some(functions(row)),
        GfKind::PrimeFunctions => Some(prime_functions(row)),
        GfKind::Distributions => distributions(row),
        GfKind::PrimeDistributions => prime_distributions(row),
        _ => None,
    }
}

fn functions(row: TabulatedRow) -> Tabulated {
    let s2 = sqrt(n(2));
    match row {
        TabulatedRow::Ordered => {
            let t = &s2 - &n(1);
            let rho = &t / &(n(2) * exp(t.clone()));
            let c = t.pow_ratio(3, 2) * (n(17) + n(12) * s2.clone())
                / (n(8) * exp(t.clone()) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
        TabulatedRow::Unordered => Tabulated {
            tau: r(1, 2),
            rho: (n(2) * exp(n(1))).recip(),
            c: &s2 / &sqrt_pi(),
        },
        TabulatedRow::Binary => {
            let t = n(1) - s2.recip();
            let rho = (&s2 - &n(1)) / (n(2) * exp(n(2) - s2.clone()));
            let c = exp(t.clone()) * (&s2 + &n(1)) / (n(2).pow_ratio(5, 4) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
        TabulatedRow::DAry(d) => {
            let d = i64::from(d);
            let t = n(1) - sqrt(n(1) - r(1, d));
            let rho = &t * &(n(1) - t.clone()).powi(d - 1) / exp(n(d) * t.clone());
            let c = sqrt(t.clone()) * exp(t.clone())
                / (n(2)
                    * sqrt(n(d - 1))
                    * (n(1) - n(d) * t.clone()).powf(&(n(2) - r(1, d)))
                    * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
        TabulatedRow::DBundled(d) => {
            let d = i64::from(d);
            let t = sqrt(n(1) + r(1, d)) - n(1);
            let rho = &t / &((n(1) + t.clone()).powi(d + 1) * exp(n(d) * t.clone()));
            let c = sqrt(t.clone())
                / (n(2)
                    * sqrt(n(d + 1))
                    * (n(1) - n(d) * t.clone()).powf(&(n(2) + r(1, d)))
                    * exp(t.clone())
                    * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
    }
}

fn prime_functions(row: TabulatedRow) -> Tabulated {
    let s2 = sqrt(n(2));
    match row {
        TabulatedRow::Ordered => {
            let t = &s2 - &n(1);
            // Printed as is; the singularity solver finds this value times τ.
            let rho = n(2) * (n(3) - n(2) * s2.clone()) * exp(t.clone());
            let c = (n(3) - n(2) * s2.clone()) * exp(t.clone()) / (n(2) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
        TabulatedRow::Unordered => Tabulated {
            tau: r(1, 2),
            rho: r(1, 4),
            c: (n(4) * sqrt_pi()).recip(),
        },
        TabulatedRow::Binary => {
            let t = n(1) - s2.recip();
            let s2m1 = &s2 - &n(1);
            let rho = s2m1.pow_ratio(3, 2) / (s2.clone() * exp(t.clone()));
            let c = sqrt(s2m1) / (n(2) * exp(t.clone()) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
        TabulatedRow::DAry(d) => {
            let d = i64::from(d);
            let t = n(1) - sqrt(n(1) - r(1, d));
            let one_dt = n(1) - n(d) * t.clone();
            let rho = &t * &one_dt.powf(&(n(1) - r(1, d))) / exp(t.clone());
            let c = sqrt(n(d)) * sqrt(n(2 * d) * t.clone() - n(1)) * rho.clone()
                / (n(2) * one_dt.powi(2) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
        TabulatedRow::DBundled(d) => {
            let d = i64::from(d);
            let t = sqrt(n(1) + r(1, d)) - n(1);
            let one_dt = n(1) - n(d) * t.clone();
            let rho = &t * &one_dt.powf(&(n(1) + r(1, d))) * exp(t.clone());
            let c = sqrt(n(d)) * sqrt(n(1) - n(2 * d) * t.clone()) * rho.clone()
                / (n(2) * one_dt.powi(2) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
    }
}

/// `τ` for `d`-ary distributions; `0/0` at `d = 2`.
fn dary_distribution_tau(d: i64) -> Option<Real> {
    (d != 2).then(|| (sqrt(n(2 * d * (d - 1))) - n(2)) / n(d - 2) - n(1))
}

fn dbundled_distribution_tau(d: i64) -> Real {
    (n(2) + sqrt(n(2 * d * (d + 1)))) / n(d + 2) - n(1)
}

fn distributions(row: TabulatedRow) -> Option<Tabulated> {
    let s2 = sqrt(n(2));
    Some(match row {
        TabulatedRow::Ordered => Tabulated {
            tau: r(1, 3),
            rho: r(27, 256),
            c: n(27) * sqrt(n(6)) / (n(128) * sqrt_pi()),
        },
        TabulatedRow::Unordered => {
            let t = &s2 - &n(1);
            let rho = &t / &(n(2) * exp(t.clone()));
            let c = sqrt(t.clone()) * (n(3) + n(2) * s2.clone()) / (n(4) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
        TabulatedRow::Binary => Tabulated {
            tau: r(1, 2),
            rho: r(1, 12),
            c: sqrt(n(3)) / (n(2) * sqrt_pi()),
        },
        TabulatedRow::DAry(d) => {
            let d = i64::from(d);
            let t = dary_distribution_tau(d)?;
            let td = n(1) - &t / &n(d);
            let rho = &t * &td.powi(d - 1) / (n(d) * (n(1) + t.clone()).powi(2));
            let c = (n(2 * d * d - 5 * d + 2) * t.clone() + n(5 * d * d - 4 * d))
                * sqrt(n(d * d + d + 2) * t.clone() - n(2 * d))
                * (n(1) + t.clone()).pow_ratio(1, d)
                * (n(1) - t.clone()).pow_ratio(1, d)
                / (n(4 * d * d * (d - 1) * (d - 2)) * td.powi(2) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
        TabulatedRow::DBundled(d) => {
            let d = i64::from(d);
            let t = dbundled_distribution_tau(d);
            let td = n(1) + &t / &n(d);
            let rho = &t / &(n(d) * (n(1) + t.clone()).powi(2) * td.powi(d + 1));
            let c = (n(2 * d * d + 5 * d + 2) * t.clone() + n(5 * d * d + 4 * d))
                * sqrt(n(d * d - d + 2) * t.clone() + n(2 * d))
                / (n(4 * d * d * (d + 1) * (d + 2))
                    * td.powi(2)
                    * (n(1) + t.clone()).pow_ratio(1, d)
                    * (n(1) - t.clone()).pow_ratio(1, d)
                    * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
    })
}

fn prime_distributions(row: TabulatedRow) -> Option<Tabulated> {
    let s2 = sqrt(n(2));
    Some(match row {
        TabulatedRow::Ordered => Tabulated {
            tau: r(1, 3),
            rho: r(4, 27),
            c: n(2) * sqrt(n(3)) / (n(27) * sqrt_pi()),
        },
        TabulatedRow::Unordered => Tabulated {
            tau: &s2 - &n(1),
            rho: n(3) - n(2) * s2.clone(),
            c: sqrt(n(3) * s2.clone() - n(4)) / (n(2) * sqrt_pi()),
        },
        TabulatedRow::Binary => Tabulated {
            tau: r(1, 2),
            rho: sqrt(n(3)) / n(18),
            c: s2 / (n(6) * sqrt_pi()),
        },
        TabulatedRow::DAry(d) => {
            let d = i64::from(d);
            let t = dary_distribution_tau(d)?;
            let rho = &t * &(n(1) - t.clone()).powf(&(n(1) - r(1, d)))
                / (n(d) * (n(1) + t.clone()).powf(&(n(1) + r(1, d))));
            let c = sqrt(n(d) * (n(3 * d + 2) * t.clone() - n(d + 2))) * rho.clone()
                / (n(d - 2) * (n(1) - t.clone()).powi(2) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
        TabulatedRow::DBundled(d) => {
            let d = i64::from(d);
            let t = dbundled_distribution_tau(d);
            let rho = &t * &(n(1) - t.clone()).powf(&(n(1) + r(1, d)))
                / (n(d) * (n(1) + t.clone()).powf(&(n(1) - r(1, d))));
            let c = sqrt(n(d) * (n(3 * d - 2) * t.clone() - n(d) + n(2))) * rho.clone()
                / (n(d + 2) * (n(1) - t.clone()).powi(2) * sqrt_pi());
            Tabulated { tau: t, rho, c }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: &Real, y: f64) -> bool {
        (x.to_f64() - y).abs() < 1e-9
    }

    #[test]
    fn rational_entries() {
        let t = tabulated(GfKind::Functions, TabulatedRow::Unordered).unwrap();
        assert!(close(&t.rho, 0.18393972058572117));
        assert!(close(&t.c, 0.7978845608028654));
        let t = tabulated(GfKind::Distributions, TabulatedRow::Ordered).unwrap();
        assert!(close(&t.rho, 27.0 / 256.0));
        let t = tabulated(GfKind::PrimeDistributions, TabulatedRow::Binary).unwrap();
        assert!(close(&t.rho, 3f64.sqrt() / 18.0));
    }

    #[test]
    fn degenerate_dary_tau() {
        assert!(tabulated(GfKind::Distributions, TabulatedRow::DAry(2)).is_none());
        assert!(tabulated(GfKind::PrimeDistributions, TabulatedRow::DAry(3)).is_some());
        assert!(tabulated(GfKind::GeneralFunctions, TabulatedRow::Ordered).is_none());
    }

    #[test]
    fn generic_rows_match_binary_at_two() {
        for kind in [GfKind::Functions, GfKind::PrimeFunctions] {
            let b = tabulated(kind, TabulatedRow::Binary).unwrap();
            let g = tabulated(kind, TabulatedRow::DAry(2)).unwrap();
            assert!(close(&b.tau, g.tau.to_f64()), "{kind}");
            assert!(close(&b.rho, g.rho.to_f64()), "{kind}");
        }
    }
}
