//! Singularity analysis of the catalog.
//!
//! For `Q = z·φ(Q)` the dominant singularity sits at `ρ = τ/φ(τ)`, with `τ`
//! the least positive root of `φ(t) = t·φ'(t)`. Each generating function `X`
//! of the catalog has a vanishing square-root term there, so its normalized
//! coefficients behave like `C·n^{-5/2}·ρ^{-n}`.
//!
//! `C` comes from `X'(z) = W(Q)` with
//! `W = X_Q·φ² / (φ − Qφ')`, which is analytic at `τ`; then
//! `C = ρ·κ·W'(τ) / (2√π)` with `Q − τ ≈ −κ√(1 − z/ρ)` and `κ = √(φ(τ)/φ₂)`,
//! `φ₂` the second Taylor coefficient of `φ` at `τ`.

mod phase;
mod radicals;
mod real;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::catalog::{CatalogEntry, GfKind};
use crate::error::{domain, Error, Result};
use crate::families::Family;
use crate::series::{solve_fixed_point, Coeff, Env, Expr, Series};

pub use phase::{phase_check, PhaseLaw, PhaseReport, Route};
pub use radicals::{tabulated, Tabulated, TabulatedRow};
pub use real::{bits_for_digits, with_precision, Real, DEFAULT_BITS};

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.decimal())
    }
}

impl Serialize for Tabulated {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Tabulated", 3)?;
        st.serialize_field("tau", &self.tau)?;
        st.serialize_field("rho", &self.rho)?;
        st.serialize_field("c", &self.c)?;
        st.end()
    }
}

/// Default number of significant digits for profiles.
pub const DEFAULT_DIGITS: u32 = 50;

/// Upper end of the scan for `τ`.
const SCAN_LIMIT: f64 = 8.0;
const SCAN_STEPS: usize = 4096;

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticProfile {
    pub family: Family,
    pub kind: GfKind,
    pub digits: u32,
    pub tau: Real,
    pub rho: Real,
    /// `C` from the expansion of `X'` at the singularity.
    pub c: Real,
    /// The closed-form row for this family, when one exists.
    pub tabulated: Option<Tabulated>,
}

impl AsymptoticProfile {
    /// `C` as used for comparisons: the closed form when tabulated.
    pub fn reference_c(&self) -> &Real {
        self.tabulated.as_ref().map_or(&self.c, |t| &t.c)
    }
}

/// Taylor expansion of `expr` around `Q = t` up to `ε^order`.
fn taylor<C: Coeff>(expr: &Expr, t: C, order: usize) -> Result<Series<C>> {
    let q = Series::new(vec![t, C::one()], order);
    Ok(expr.eval(&Env::with_q(q))?)
}

/// `φ(t) − t·φ'(t)` and its derivative `−t·φ''(t)`.
fn characteristic<C: Coeff>(phi: &Expr, t: &C) -> Result<(C, C)> {
    let s = taylor(phi, t.clone(), 2)?;
    let f = s.coeff(0) - t.clone() * s.coeff(1);
    let df = -(C::from_int(2) * t.clone() * s.coeff(2));
    Ok((f, df))
}

fn phi_of(entry: &CatalogEntry) -> Result<&Expr> {
    if entry.kind.is_bivariate() {
        return Err(domain(format!("{} is bivariate", entry.kind)));
    }
    entry.phi().ok_or_else(|| {
        domain(format!(
            "{} {}: Q is not given by Q = z phi(Q)",
            entry.family, entry.kind
        ))
    })
}

/// Brackets the least positive root of `φ(t) = tφ'(t)` in double precision.
fn bracket(phi: &Expr) -> Result<f64> {
    let g = |t: f64| characteristic::<f64>(phi, &t).ok().map(|(f, _)| f);
    let h = SCAN_LIMIT / SCAN_STEPS as f64;
    let mut lo = 0.0;
    let mut g_lo = g(0.0).filter(|v| *v > 0.0).ok_or(Error::NoRoot(0.0))?;
    for i in 1..=SCAN_STEPS {
        let t = h * i as f64;
        let Some(g_t) = g(t).filter(|v| v.is_finite()) else {
            return Err(Error::NoRoot(t));
        };
        if g_t.signum() != g_lo.signum() {
            let mut hi = t;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let g_mid = g(mid).ok_or(Error::NoRoot(mid))?;
                if g_mid.signum() == g_lo.signum() {
                    lo = mid;
                    g_lo = g_mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        lo = t;
        g_lo = g_t;
    }
    Err(Error::NoRoot(SCAN_LIMIT))
}

fn ten_to_minus(k: u32) -> Real {
    Real::ratio(1, 10).powi(i64::from(k))
}

/// Solves for `τ`, `ρ` and `C` of `(family, kind)` to `digits` significant digits.
pub fn singularity(family: Family, kind: GfKind, digits: u32) -> Result<AsymptoticProfile> {
    let entry = CatalogEntry::lookup(family, kind)?;
    let phi = phi_of(&entry)?;
    let start = bracket(phi)?;
    with_precision(bits_for_digits(digits), || {
        let tol = ten_to_minus(digits + 3);
        let mut t = Real::from_f64(start);
        let mut converged = false;
        for _ in 0..64 {
            let (f, df) = characteristic(phi, &t)?;
            let step = f / df;
            t = &t - &step;
            if step.abs() < tol {
                converged = true;
                break;
            }
        }
        if !converged || !t.is_finite() || t.is_negative() {
            return Err(Error::NoRoot(start));
        }
        let c = constant(&entry, phi, &t, &tol)?;
        let phi_tau = taylor(phi, t.clone(), 0)?.coeff(0);
        let rho = &t / &phi_tau;
        let tabulated = TabulatedRow::for_family(family).and_then(|row| tabulated(kind, row));
        Ok(AsymptoticProfile {
            family,
            kind,
            digits,
            tau: t,
            rho,
            c,
            tabulated,
        })
    })
}

/// `C` from the expansion of `X'(z) = W(Q)` at `Q = τ`.
fn constant(entry: &CatalogEntry, phi: &Expr, tau: &Real, tol: &Real) -> Result<Real> {
    let p = taylor(phi, tau.clone(), 3)?;
    let x = taylor(&entry.x, tau.clone(), 3)?;
    let num = (&x.derivative() * &(&p * &p).truncate(2)).truncate(2);
    let shifted = Series::new(vec![tau.clone(), Real::from_i64(1)], 2);
    let den = &p.truncate(2) - &(&shifted * &p.derivative());
    let scale = num.coeff(1).abs() + Real::from_i64(1);
    if num.coeff(0).abs() > tol.clone() * scale {
        return Err(Error::Integrity(format!(
            "{} {}: X has a square-root term at tau (X_Q(tau) = {:.6})",
            entry.family,
            entry.kind,
            x.coeff(1)
        )));
    }
    let (n1, n2) = (num.coeff(1), num.coeff(2));
    let (d1, d2) = (den.coeff(1), den.coeff(2));
    if d1.is_zero() {
        return Err(Error::Integrity(format!(
            "{} {}: degenerate singularity",
            entry.family, entry.kind
        )));
    }
    let w1 = (n2 * d1.clone() - n1 * d2) / (d1.clone() * d1);
    let kappa = (p.coeff(0) / p.coeff(2)).sqrt();
    let rho = tau / &p.coeff(0);
    Ok(rho * kappa * w1 / (Real::from_i64(2) * Real::pi().sqrt()))
}

/// One rung of a ratio ladder.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Rung {
    pub n: usize,
    /// `x_n·n^{5/2}·ρ^n`.
    pub ratio: f64,
    /// Richardson extrapolation ending at `n`.
    pub extrapolated: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub family: Family,
    pub kind: GfKind,
    pub n_max: usize,
    pub rho: f64,
    pub reference: f64,
    pub reference_tabulated: bool,
    pub ladder: Vec<Rung>,
    pub extrapolated: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    /// Whether the ratios over the upper half of the ladder move in one direction.
    pub eventually_monotone: bool,
    pub passed: bool,
}

/// Richardson order used by [`ratio_check`].
pub const RICHARDSON_ORDER: usize = 4;

/// Limit of `r` assuming `r_n = L + a/n + b/n² + …`, from `r_{n−k}, …, r_n`.
pub fn richardson(r: &[f64], n: usize, k: usize) -> f64 {
    let start = n - k;
    let mut fact = vec![1.0f64; k + 1];
    for j in 1..=k {
        fact[j] = fact[j - 1] * j as f64;
    }
    (0..=k)
        .map(|j| {
            let sign = if (k + j).is_multiple_of(2) { 1.0 } else { -1.0 };
            let m = (start + j) as f64;
            sign * m.powi(k as i32) * r[start + j] / (fact[j] * fact[k - j])
        })
        .sum()
}

/// `x_n·ρ^n` for `n = 0..=n_max`, from the series of `X(ρz)` in double precision.
fn scaled_coefficients(
    entry: &CatalogEntry,
    phi: &Expr,
    rho: f64,
    n_max: usize,
) -> Result<Vec<f64>> {
    if entry.x.mentions(&Expr::z()) {
        return Err(domain(format!(
            "{} {}: X depends on z",
            entry.family, entry.kind
        )));
    }
    let rho = BigRational::from_float(rho).ok_or_else(|| domain("rho is not finite"))?;
    let q = solve_fixed_point::<f64>(&(Expr::Const(rho) * phi.clone()), n_max, None)?;
    Ok(entry.x.eval(&Env::with_q(q))?.into_coeffs())
}

/// Ratio ladder `x_n·n^{5/2}·ρ^n` up to `n_max`, extrapolated and compared with `C`.
pub fn ratio_check(
    family: Family,
    kind: GfKind,
    n_max: usize,
    tolerance: f64,
) -> Result<RatioReport> {
    if n_max < 2 * RICHARDSON_ORDER + 2 {
        return Err(domain(format!("ladder length {n_max} too short")));
    }
    let profile = singularity(family, kind, 30)?;
    let entry = CatalogEntry::lookup(family, kind)?;
    let phi = phi_of(&entry)?;
    let rho = profile.rho.to_f64();
    let scaled = scaled_coefficients(&entry, phi, rho, n_max)?;
    let r: Vec<f64> = scaled
        .iter()
        .enumerate()
        .map(|(n, a)| a * (n as f64).powf(2.5))
        .collect();
    let k = RICHARDSON_ORDER;
    let step = (n_max / 20).max(1);
    let ladder = (k + 1..=n_max)
        .filter(|n| n % step == 0 || *n == n_max)
        .map(|n| Rung {
            n,
            ratio: r[n],
            extrapolated: richardson(&r, n, k),
        })
        .collect();
    let upper = &r[n_max / 2..=n_max];
    let diffs: Vec<f64> = upper.windows(2).map(|w| w[1] - w[0]).collect();
    let eventually_monotone = diffs.iter().all(|d| *d >= 0.0) || diffs.iter().all(|d| *d <= 0.0);
    let extrapolated = richardson(&r, n_max, k);
    let reference = profile.reference_c().to_f64();
    let relative_error = ((extrapolated - reference) / reference).abs();
    Ok(RatioReport {
        family,
        kind,
        n_max,
        rho,
        reference,
        reference_tabulated: profile.tabulated.is_some(),
        ladder,
        extrapolated,
        relative_error,
        tolerance,
        eventually_monotone,
        passed: relative_error.is_finite() && relative_error <= tolerance,
    })
}

/// `|a − b|` in the working precision of the arguments.
pub fn abs_diff(a: &Real, b: &Real) -> f64 {
    (a - b).abs().to_f64()
}

/// Whether a profile satisfies its defining equations.
pub fn consistent(profile: &AsymptoticProfile) -> Result<bool> {
    let entry = CatalogEntry::lookup(profile.family, profile.kind)?;
    let phi = phi_of(&entry)?;
    with_precision(bits_for_digits(profile.digits), || {
        let (f, _) = characteristic(phi, &profile.tau)?;
        let phi_tau = taylor(phi, profile.tau.clone(), 0)?.coeff(0);
        let tol = ten_to_minus(profile.digits);
        Ok(f.abs() < tol
            && (&profile.rho * &phi_tau - profile.tau.clone()).abs() < tol
            && !profile.c.is_negative()
            && profile.tau.is_finite()
            && !(profile.tau.clone() - Real::zero()).is_negative())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(family: Family, kind: GfKind) -> AsymptoticProfile {
        singularity(family, kind, DEFAULT_DIGITS).unwrap()
    }

    #[test]
    fn unordered_functions() {
        let p = profile(Family::Unordered, GfKind::Functions);
        assert!(abs_diff(&p.tau, &Real::ratio(1, 2)) < 1e-45);
        assert!((p.rho.to_f64() - 0.1839397205857212).abs() < 1e-12);
        assert!((p.c.to_f64() - 0.7978845608028654).abs() < 1e-12);
        assert!(consistent(&p).unwrap());
    }

    #[test]
    fn ordered_rows() {
        let p = profile(Family::Ordered, GfKind::Functions);
        assert!((p.tau.to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let p = profile(Family::Ordered, GfKind::Distributions);
        assert!(abs_diff(&p.rho, &Real::ratio(27, 256)) < 1e-45);
        let p = profile(Family::Ordered, GfKind::PrimeDistributions);
        assert!((p.c.to_f64() - 0.07238).abs() < 1e-4);
    }

    #[test]
    fn binary_prime_distributions() {
        let p = profile(Family::DAry(2), GfKind::PrimeDistributions);
        assert!(abs_diff(&p.rho, &(Real::from_i64(3).sqrt() / Real::from_i64(18))) < 1e-45);
    }

    #[test]
    fn bivariate_and_implicit_rows_are_rejected() {
        assert!(singularity(Family::Ordered, GfKind::GeneralFunctions, 20).is_err());
        assert!(singularity(Family::StrictBinary, GfKind::Distributions, 20).is_err());
    }

    #[test]
    fn richardson_removes_inverse_powers() {
        let r: Vec<f64> = (0..40)
            .map(|n| {
                if n == 0 {
                    0.0
                } else {
                    2.0 + 3.0 / n as f64 - 5.0 / (n * n) as f64
                }
            })
            .collect();
        assert!((richardson(&r, 39, 3) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn short_ladder() {
        let rep = ratio_check(Family::Unordered, GfKind::Functions, 60, 0.1).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}
