//! Explicit enumeration formulas, evaluated with exact rationals.
//!
//! Nothing here touches the series engine. Binomials use the falling-factorial
//! convention, so negative and half-integer upper arguments are allowed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::catalog::GfKind;
use crate::error::{domain, Error, Result};
use crate::families::Family;
use crate::numeric::{big, catalan, factorial, gbinom, int, rat, schroder, to_count};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormulaId {
    /// Ordered `G_n` with `C(2n-2, ·)`, as obtained from the differential equation.
    OrderedG,
    /// Ordered `G_n` exactly as tabulated, with `C(2n-3, ·)`.
    OrderedGPrinted,
    UnorderedG,
    BinaryG,
    OrderedP,
    UnorderedP,
    BinaryP,
    OrderedGTilde,
    UnorderedGTilde,
    BinaryGTilde,
    OrderedPTilde,
    /// Tabulated sum form of unordered `P~_n`.
    UnorderedPTilde,
    /// `(n-1)!·S_{n-1}`.
    UnorderedPTildeSchroder,
    BinaryPTilde,
    /// Unordered `F_{n,m}`.
    UnorderedF,
    /// Ordered `F~_{n,m}` by coefficient extraction.
    OrderedFTilde,
    Catalan,
    Schroder,
}

impl FormulaId {
    pub const ALL: [FormulaId; 18] = [
        FormulaId::OrderedG,
        FormulaId::OrderedGPrinted,
        FormulaId::UnorderedG,
        FormulaId::BinaryG,
        FormulaId::OrderedP,
        FormulaId::UnorderedP,
        FormulaId::BinaryP,
        FormulaId::OrderedGTilde,
        FormulaId::UnorderedGTilde,
        FormulaId::BinaryGTilde,
        FormulaId::OrderedPTilde,
        FormulaId::UnorderedPTilde,
        FormulaId::UnorderedPTildeSchroder,
        FormulaId::BinaryPTilde,
        FormulaId::UnorderedF,
        FormulaId::OrderedFTilde,
        FormulaId::Catalan,
        FormulaId::Schroder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::OrderedG => "ordered-g",
            FormulaId::OrderedGPrinted => "ordered-g-printed",
            FormulaId::UnorderedG => "unordered-g",
            FormulaId::BinaryG => "binary-g",
            FormulaId::OrderedP => "ordered-p",
            FormulaId::UnorderedP => "unordered-p",
            FormulaId::BinaryP => "binary-p",
            FormulaId::OrderedGTilde => "ordered-g~",
            FormulaId::UnorderedGTilde => "unordered-g~",
            FormulaId::BinaryGTilde => "binary-g~",
            FormulaId::OrderedPTilde => "ordered-p~",
            FormulaId::UnorderedPTilde => "unordered-p~",
            FormulaId::UnorderedPTildeSchroder => "unordered-p~-schroder",
            FormulaId::BinaryPTilde => "binary-p~",
            FormulaId::UnorderedF => "unordered-f",
            FormulaId::OrderedFTilde => "ordered-f~",
            FormulaId::Catalan => "catalan",
            FormulaId::Schroder => "schroder",
        }
    }

    /// The catalog row this formula counts, if any.
    pub fn target(self) -> Option<(Family, GfKind)> {
        use FormulaId::*;
        let binary = Family::DAry(2);
        Some(match self {
            OrderedG | OrderedGPrinted => (Family::Ordered, GfKind::Functions),
            UnorderedG => (Family::Unordered, GfKind::Functions),
            BinaryG => (binary, GfKind::Functions),
            OrderedP => (Family::Ordered, GfKind::PrimeFunctions),
            UnorderedP => (Family::Unordered, GfKind::PrimeFunctions),
            BinaryP => (binary, GfKind::PrimeFunctions),
            OrderedGTilde => (Family::Ordered, GfKind::Distributions),
            UnorderedGTilde => (Family::Unordered, GfKind::Distributions),
            BinaryGTilde => (binary, GfKind::Distributions),
            OrderedPTilde => (Family::Ordered, GfKind::PrimeDistributions),
            UnorderedPTilde | UnorderedPTildeSchroder => {
                (Family::Unordered, GfKind::PrimeDistributions)
            }
            BinaryPTilde => (binary, GfKind::PrimeDistributions),
            UnorderedF => (Family::Unordered, GfKind::GeneralFunctions),
            OrderedFTilde => (Family::Ordered, GfKind::GeneralDistributions),
            Catalan | Schroder => return None,
        })
    }

    /// Smallest validated `n`.
    pub fn min_n(self) -> usize {
        use FormulaId::*;
        match self {
            UnorderedG | UnorderedP | UnorderedPTildeSchroder | UnorderedF | OrderedFTilde => 1,
            Catalan | Schroder => 0,
            _ => 2,
        }
    }

    /// False only for the form rederived from the differential equation.
    pub fn is_printed(self) -> bool {
        self != FormulaId::OrderedG
    }

    /// The verbatim form known to disagree with the exact counts.
    pub fn is_misprint(self) -> bool {
        self == FormulaId::OrderedGPrinted
    }

    pub fn takes_m(self) -> bool {
        matches!(self, FormulaId::UnorderedF | FormulaId::OrderedFTilde)
    }

    /// The formulas taking only `n` that count a catalog row.
    pub fn univariate() -> impl Iterator<Item = FormulaId> {
        FormulaId::ALL
            .into_iter()
            .filter(|f| !f.takes_m() && f.target().is_some())
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace("tilde", "~");
        FormulaId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| domain(format!("unknown formula {s:?}")))
    }
}

fn fact(n: i64) -> BigRational {
    big(&factorial(n as usize))
}

/// `C(a, k)`, zero for negative `k`.
fn binom(a: impl Into<BigRational>, k: i64) -> BigRational {
    if k < 0 {
        BigRational::zero()
    } else {
        gbinom(&a.into(), k as usize)
    }
}

fn pow(base: BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), e.unsigned_abs() as usize)
    }
}

/// Evaluates a formula; `m` is required exactly for the two-parameter ones.
pub fn evaluate(id: FormulaId, n: usize, m: Option<usize>) -> Result<BigUint> {
    let value = evaluate_rational(id, n, m)?;
    to_count(&value).ok_or_else(|| {
        Error::Integrity(format!(
            "formula {id} at n = {n} gives {value}, not a count"
        ))
    })
}

/// The exact value before the integrality check.
pub fn evaluate_rational(id: FormulaId, n: usize, m: Option<usize>) -> Result<BigRational> {
    if n < id.min_n() {
        return Err(domain(format!(
            "{id} is validated for n >= {} only",
            id.min_n()
        )));
    }
    if id.takes_m() != m.is_some() {
        return Err(domain(match m {
            Some(_) => format!("{id} takes no m"),
            None => format!("{id} needs m"),
        }));
    }
    if let Some(m) = m {
        if m > n {
            return Err(domain(format!("m = {m} exceeds n = {n}")));
        }
    }
    let n = n as i64;
    use FormulaId::*;
    Ok(match id {
        OrderedG => ordered_g(n, 2 * n - 2),
        OrderedGPrinted => ordered_g(n, 2 * n - 3),
        UnorderedG => {
            let s = sum(0, n - 1, |k| int(n - k) * pow(int(2 * n), k) / fact(k));
            pow(fact(n - 1), 2) * s
        }
        BinaryG => {
            let s = sum(0, n - 1, |k| {
                let inner = sum(0, n - 1 - k, |l| {
                    let t = int(2 * n - k - l);
                    let bracket = int(2) - t.clone() * (t - int(1)) / int(n * (n + 1));
                    pow(rat(1, 2), l)
                        * binom(int(2 * l), l)
                        * binom(int(2 * n - k - l - 2), n - 1)
                        * bracket
                });
                pow(int(2 * n + 1), k) / fact(k) * inner
            });
            fact(n) * fact(n - 1) * s
        }
        OrderedP => {
            let s = sum(0, n - 2, |k| {
                binom(int(2 * n - 1 + k), k) * pow(int(1 - n), n - 2 - k) / fact(n - 2 - k)
            });
            fact(n) * fact(n - 2) * s
        }
        UnorderedP => fact(2 * n - 2),
        BinaryP => {
            let s = sum(0, n - 2, |k| {
                binom(rat(n + 1, 2) + int(k), k) * pow(int(2), k + 1) * pow(int(n - 1), n - 2 - k)
                    / fact(n - 2 - k)
            });
            fact(n) * fact(n - 2) * s
        }
        OrderedGTilde => {
            fact(n - 1)
                * sum(0, n - 1, |k| {
                    binom(int(4 * n - 3), k) * int(3 - 2 * (n - k))
                })
        }
        UnorderedGTilde => {
            let s = sum(0, n - 1, |k| {
                let first = rat(3 * n + k + 1, n + k + 1) * binom(int(2 * n - 1), n + k);
                let tail = sum(0, n - 1 - k, |l| binom(int(2 * n), l));
                pow(int(n), k) / fact(k) * (first - tail)
            });
            fact(n - 1) * s
        }
        BinaryGTilde => {
            let s = sum(0, n - 1, |k| {
                let inner = sum(0, n - k - 1, |l| {
                    let j = n - k - l;
                    pow(rat(1, 2), l)
                        * binom(int(n + l + 1), l)
                        * binom(int(j) - rat(3, 2), j - 1)
                        * rat(1 - 2 * j, 2 * j - 3)
                });
                binom(int(2 * n) - rat(1, 2), k) * inner
            });
            fact(n - 1) * pow(int(2), n - 1) * s
        }
        OrderedPTilde => int(2) * fact(3 * n - 3) / fact(2 * n - 1),
        UnorderedPTilde => {
            int(2)
                * fact(n - 2)
                * sum(0, n - 2, |k| {
                    binom(int(n + k), k) * binom(int(n - 1), k + 1)
                })
        }
        UnorderedPTildeSchroder => fact(n - 1) * big(&schroder(n as usize - 1)),
        BinaryPTilde => {
            fact(n - 1) * pow(int(2), 2 * n - 1) / int(n + 1) * binom(rat(3 * (n - 1), 2), n - 1)
        }
        UnorderedF => {
            let m = m.expect("checked") as i64;
            let pre = fact(n - 1) * fact(m) * pow(int(n), n - 1 - m) / fact(n - m);
            let s = sum(0, m, |k| {
                binom(int(2 * m - n - k), m - k) * int(n - k) * pow(int(2 * n), k) / fact(k)
            });
            pre * s
        }
        OrderedFTilde => ordered_f_tilde(n, m.expect("checked") as i64),
        Catalan => big(&catalan(n as usize)),
        Schroder => big(&schroder(n as usize)),
    })
}

fn sum(from: i64, to: i64, f: impl Fn(i64) -> BigRational) -> BigRational {
    (from..=to).map(f).fold(BigRational::zero(), |a, b| a + b)
}

fn ordered_g(n: i64, top: i64) -> BigRational {
    let s = sum(0, n - 2, |k| {
        let inner = sum(0, n - 2 - k, |l| {
            int((l + 1) * (2 * l + 3)) * binom(int(top), n - 2 - k - l)
        });
        pow(int(n - 1), k) / fact(k) * inner
    });
    fact(n) * fact(n - 2) * s
}

/// `(n-1)!·C(2n-1, n-m)·[Q^m] (1-3Q)((n-m)/(2n-1) + Q)(1-Q)^{n-m-2}(1+Q)^{2n+2m-3}`.
fn ordered_f_tilde(n: i64, m: i64) -> BigRational {
    let deg = m as usize;
    let poly = mul(
        &mul(&[int(1), int(-3)], &[rat(n - m, 2 * n - 1), int(1)], deg),
        &mul(
            &binomial_series(-1, n - m - 2, deg),
            &binomial_series(1, 2 * n + 2 * m - 3, deg),
            deg,
        ),
        deg,
    );
    let coeff = poly.get(deg).cloned().unwrap_or_else(BigRational::zero);
    fact(n - 1) * binom(int(2 * n - 1), n - m) * coeff
}

/// Coefficients of `(1 + s·Q)^e` up to `Q^deg`, for any integer `e`.
fn binomial_series(s: i64, e: i64, deg: usize) -> Vec<BigRational> {
    (0..=deg as i64)
        .map(|j| binom(int(e), j) * pow(int(s), j))
        .collect()
}

/// Product truncated at degree `deg`.
fn mul(a: &[BigRational], b: &[BigRational], deg: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); deg + 1];
    for (i, x) in a.iter().enumerate().take(deg + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(id: FormulaId, n: usize) -> BigUint {
        evaluate(id, n, None).unwrap()
    }

    #[test]
    fn anchor_values() {
        assert_eq!(ev(FormulaId::UnorderedG, 3), BigUint::from(132u32));
        assert_eq!(
            evaluate(FormulaId::UnorderedF, 2, Some(1)).unwrap(),
            BigUint::from(4u32)
        );
        assert_eq!(ev(FormulaId::OrderedPTilde, 3), BigUint::from(12u32));
        assert_eq!(ev(FormulaId::BinaryPTilde, 3), BigUint::from(48u32));
        assert_eq!(
            evaluate(FormulaId::OrderedFTilde, 3, Some(1)).unwrap(),
            BigUint::from(36u32)
        );
        assert_eq!(ev(FormulaId::Schroder, 2), BigUint::from(6u32));
        assert_eq!(
            ev(FormulaId::UnorderedPTildeSchroder, 3),
            BigUint::from(12u32)
        );
    }

    #[test]
    fn printed_ordered_g_differs_at_three() {
        assert_eq!(ev(FormulaId::OrderedG, 3), BigUint::from(168u32));
        assert_eq!(ev(FormulaId::OrderedGPrinted, 3), BigUint::from(150u32));
    }

    #[test]
    fn ordered_p_tilde_at_one_is_outside_validated_range() {
        assert!(evaluate(FormulaId::OrderedPTilde, 1, None).is_err());
    }

    #[test]
    fn argument_errors() {
        assert!(evaluate(FormulaId::UnorderedF, 3, None).is_err());
        assert!(evaluate(FormulaId::UnorderedG, 3, Some(1)).is_err());
        assert!(evaluate(FormulaId::UnorderedF, 3, Some(4)).is_err());
        assert!("nope".parse::<FormulaId>().is_err());
        for id in FormulaId::ALL {
            assert_eq!(id.name().parse::<FormulaId>().unwrap(), id);
        }
    }
}
