//! Success probability of `m = αn` drivers as `n → ∞`, and its finite-`n`
//! counterpart from exact counts.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::catalog::general_table;
use crate::closed_forms::{evaluate, FormulaId};
use crate::error::{domain, Result};
use crate::families::Family;
use crate::numeric::{binomial, ratio_to_f64};

/// Limit law `p(α) = C(α)·√(1 − α/α₀)` below the critical load `α₀`, zero above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PhaseLaw {
    pub family: Family,
    pub distributions: bool,
}

impl PhaseLaw {
    pub const ALL: [PhaseLaw; 6] = [
        PhaseLaw::functions(Family::Ordered),
        PhaseLaw::functions(Family::Unordered),
        PhaseLaw::functions(Family::DAry(2)),
        PhaseLaw::distributions(Family::Ordered),
        PhaseLaw::distributions(Family::Unordered),
        PhaseLaw::distributions(Family::DAry(2)),
    ];

    const fn functions(family: Family) -> PhaseLaw {
        PhaseLaw {
            family,
            distributions: false,
        }
    }

    const fn distributions(family: Family) -> PhaseLaw {
        PhaseLaw {
            family,
            distributions: true,
        }
    }

    pub fn new(family: Family, distributions: bool) -> Result<PhaseLaw> {
        let law = PhaseLaw {
            family,
            distributions,
        };
        if PhaseLaw::ALL.contains(&law) {
            Ok(law)
        } else {
            Err(domain(format!(
                "no limit law for {family}; available for ordered, unordered and binary trees"
            )))
        }
    }

    /// Critical load factor.
    pub fn alpha0(self) -> f64 {
        let s2 = std::f64::consts::SQRT_2;
        match (self.family, self.distributions) {
            (Family::Ordered, false) => s2 - 1.0,
            (Family::Unordered, false) => 0.5,
            (_, false) => 2.0 - s2,
            (Family::Ordered, true) => 1.0 / 3.0,
            (Family::Unordered, true) => s2 - 1.0,
            (_, true) => 0.5,
        }
    }

    /// The bounded prefactor `C(α)`.
    pub fn prefactor(self, a: f64) -> f64 {
        let s2 = std::f64::consts::SQRT_2;
        match (self.family, self.distributions) {
            (Family::Ordered, false) => {
                ((s2 - 1.0) * a + 1.0).sqrt() / ((1.0 - a).powi(2) * a.exp())
            }
            (Family::Unordered, false) => 1.0 / (1.0 - a),
            (_, false) => (2.0 - (2.0 - s2) * a).sqrt() * (a / 2.0).exp() / (2.0 - 2.0 * a).sqrt(),
            (Family::Ordered, true) => 1.0 / ((1.0 - a).powi(2) * (1.0 + a).sqrt()),
            (Family::Unordered, true) => ((s2 - 1.0) * a + 1.0).sqrt() / (1.0 - a),
            (_, true) => ((1.0 + a) / (1.0 - a)).sqrt(),
        }
    }

    /// `p(α)` in its unfactored radical form, valid for `α ≤ α₀`.
    pub fn radical(self, a: f64) -> f64 {
        let a2 = a * a;
        match (self.family, self.distributions) {
            (Family::Ordered, false) => (1.0 - 2.0 * a - a2).sqrt() / ((1.0 - a).powi(2) * a.exp()),
            (Family::Unordered, false) => (1.0 - 2.0 * a).sqrt() / (1.0 - a),
            (_, false) => (2.0 - 4.0 * a + a2).sqrt() * (a / 2.0).exp() / (2.0 - 2.0 * a).sqrt(),
            (Family::Ordered, true) => {
                (1.0 - 3.0 * a).sqrt() / ((1.0 - a).powi(2) * (1.0 + a).sqrt())
            }
            (Family::Unordered, true) => (1.0 - 2.0 * a - a2).sqrt() / (1.0 - a),
            (_, true) => (1.0 - a - 2.0 * a2).sqrt() / (1.0 - a).sqrt(),
        }
    }

    /// Limiting probability that all `αn` drivers park.
    pub fn probability(self, a: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&a) {
            return Err(domain(format!("load factor {a} outside [0, 1]")));
        }
        let a0 = self.alpha0();
        Ok(if a >= a0 {
            0.0
        } else {
            self.prefactor(a) * (1.0 - a / a0).sqrt()
        })
    }

    /// Exact `F_{n,m}` or `F~_{n,m}`, with the route used.
    fn exact_count(self, n: usize, m: usize) -> Result<(BigUint, Route)> {
        let closed = match (self.family, self.distributions) {
            (Family::Unordered, false) => Some(FormulaId::UnorderedF),
            (Family::Ordered, true) => Some(FormulaId::OrderedFTilde),
            _ => None,
        };
        match closed {
            Some(id) => Ok((evaluate(id, n, Some(m))?, Route::ClosedForm)),
            None => {
                let mut table = general_table(self.family, self.distributions, n)?;
                let row = table.swap_remove(n - 1);
                Ok((row[m].clone(), Route::Series))
            }
        }
    }
}

impl fmt::Display for PhaseLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match self.family {
            Family::DAry(2) => "binary".to_string(),
            other => other.to_string(),
        };
        let kind = if self.distributions {
            "distributions"
        } else {
            "functions"
        };
        write!(f, "{family} {kind}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    ClosedForm,
    Series,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseReport {
    pub law: String,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub alpha0: f64,
    /// Exact probability at size `n` with `m = round(αn)` drivers.
    pub exact: f64,
    pub limit: f64,
    /// `|exact − limit| / limit`, or the absolute gap when the limit is zero.
    pub relative_gap: f64,
    pub route: Route,
}

/// Compares the exact success probability at size `n` against `p(α)`.
pub fn phase_check(law: PhaseLaw, n: usize, a: f64) -> Result<PhaseReport> {
    let limit = law.probability(a)?;
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let m = (a * n as f64).round() as usize;
    let (count, route) = law.exact_count(n, m)?;
    let trees = law
        .family
        .tree_count(n)
        .ok_or_else(|| domain(format!("no tree count for {}", law.family)))?;
    let outcomes = if law.distributions {
        binomial(n + m - 1, m)
    } else {
        BigUint::from(n).pow(m as u32)
    };
    let exact = ratio_to_f64(&count, &(trees * outcomes));
    let gap = (exact - limit).abs();
    Ok(PhaseReport {
        law: law.to_string(),
        n,
        m,
        alpha: a,
        alpha0: law.alpha0(),
        exact,
        limit,
        relative_gap: if limit > 0.0 { gap / limit } else { gap },
        route,
    })
}
