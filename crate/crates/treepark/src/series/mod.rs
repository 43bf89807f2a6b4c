//! Truncated formal power series.
//!
//! A [`Series`] of order `N` stores the coefficients of `z^0 … z^N`. Binary
//! operations truncate to the smaller order of their operands. Bivariate series
//! are `Series<Poly>`: each `z`-coefficient is a polynomial in the second
//! variable.

mod coeff;
mod expr;
mod solve;

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

pub use coeff::{rational_pow, Coeff, Poly};
pub use expr::{Env, Expr};
pub use solve::{lagrange_coefficient, lagrange_series, solve_fixed_point, solve_implicit};

use crate::numeric::int;

/// Exact univariate series.
pub type RatSeries = Series<BigRational>;
/// Exact bivariate series.
pub type BiSeries = Series<Poly>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("constant term {0} is not invertible")]
    NotInvertible(String),
    #[error("{op} of constant term {value} is not representable in the coefficient ring")]
    Unrepresentable { op: &'static str, value: String },
    #[error("inner series of a composition must have zero constant term")]
    CompositionConstantTerm,
    #[error("power {exponent} of a series with valuation {valuation} is not a power series")]
    FractionalValuation { exponent: String, valuation: usize },
    #[error("expression uses variable {0} but no value was supplied")]
    UnboundVariable(&'static str),
    #[error("phi(0) = 0: the fixed point Q = z phi(Q) has no admissible solution")]
    NoAdmissibleSolution,
    #[error("right-hand side must vanish at z = 0 for the fixed point to be a power series")]
    NotContracting,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Series<C> {
    /// Builds a series of the given order, padding or truncating `coeffs`.
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Series::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        Series::new(vec![c], order)
    }

    /// The series `z`.
    pub fn var(order: usize) -> Self {
        Series::monomial(C::one(), 1, order)
    }

    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut coeffs = vec![C::zero(); order + 1];
        if k <= order {
            coeffs[k] = c;
        }
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Index of the first nonzero coefficient, `None` if all known ones vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series::new(
            self.coeffs[..=order.min(self.order())].to_vec(),
            order.min(self.order()),
        )
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// Multiplies by `z^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![C::zero(); k.min(n + 1)];
        coeffs.extend(self.coeffs.iter().take((n + 1).saturating_sub(k)).cloned());
        Series { coeffs }
    }

    /// Divides by `z^k`; the first `k` coefficients must vanish. The order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if k > self.order() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Series {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        let inv0 = self.coeffs[0]
            .inverse()
            .ok_or_else(|| SeriesError::NotInvertible(format!("{:?}", self.coeffs[0])))?;
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc + self.coeffs[j].clone() * out[k - j].clone();
                }
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(Series { coeffs: out })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, SeriesError> {
        Ok(self * &rhs.recip()?)
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Series::zero(0);
        }
        Series {
            coeffs: (1..=self.order())
                .map(|k| self.coeffs[k].clone() * C::from_int(k as i64))
                .collect(),
        }
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integral(&self) -> Self {
        let mut coeffs = vec![C::zero()];
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.clone() * C::from_rational(&(int(1) / int(k as i64 + 1)))),
        );
        Series { coeffs }
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0]
            .exp_const()
            .ok_or_else(|| unrepresentable("exp", &self.coeffs[0]))?;
        let n = self.order();
        let mut e: Vec<C> = Vec::with_capacity(n + 1);
        e.push(C::one());
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc + C::from_int(j as i64) * self.coeffs[j].clone() * e[k - j].clone();
                }
            }
            e.push(acc * C::from_rational(&(int(1) / int(k as i64))));
        }
        Ok(Series { coeffs: e }.scale(&c0))
    }

    pub fn ln(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0]
            .ln_const()
            .ok_or_else(|| unrepresentable("ln", &self.coeffs[0]))?;
        let n = self.order();
        if n == 0 {
            return Ok(Series::constant(c0, 0));
        }
        let quotient = self.derivative().div(&self.truncate(n - 1))?;
        let mut out = quotient.integral();
        out.coeffs[0] = c0;
        Ok(out)
    }

    /// `ln(1 + self)` for a series with zero constant term.
    pub fn log1p(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(unrepresentable("log1p", &self.coeffs[0]));
        }
        (self + &Series::one(self.order())).ln()
    }

    /// Rational power. A unit constant term `c` is handled as
    /// `c^p · exp(p·ln(self/c))`; a series `z^v·g` with `p·v` integral as
    /// `z^{p v}·g^p`.
    pub fn pow(&self, p: &BigRational) -> Result<Self, SeriesError> {
        if p.is_integer() {
            if let Some(k) = num_traits::ToPrimitive::to_i64(&p.to_integer()) {
                return self.powi(k);
            }
        }
        let n = self.order();
        match self.valuation() {
            None => {
                if p > &BigRational::zero() {
                    Ok(Series::zero(n))
                } else {
                    Err(SeriesError::NotInvertible("0".into()))
                }
            }
            Some(0) => {
                let c = self.coeffs[0].clone();
                let cp = c.pow_const(p).ok_or_else(|| unrepresentable("pow", &c))?;
                let unit = self.scale(&c.inverse().expect("nonzero constant term"));
                let body = (unit.ln()?.scale(&C::from_rational(p))).exp()?;
                Ok(body.scale(&cp))
            }
            Some(v) => {
                let shifted = p * int(v as i64);
                if !shifted.is_integer() || shifted < BigRational::zero() {
                    return Err(SeriesError::FractionalValuation {
                        exponent: p.to_string(),
                        valuation: v,
                    });
                }
                let s =
                    num_traits::ToPrimitive::to_usize(&shifted.to_integer()).expect("small shift");
                let g = self.shift_down(v).expect("leading zeros").pow(p)?;
                let order = g.order() + s;
                Ok(Series::new(g.shift_up_grow(s), order))
            }
        }
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, k: i64) -> Result<Self, SeriesError> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Series::one(self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// `self(inner(z))` by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::CompositionConstantTerm);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Series::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    fn shift_up_grow(&self, k: usize) -> Vec<C> {
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        coeffs
    }
}

impl Series<Poly> {
    /// Lifts a univariate series to one constant in the second variable.
    pub fn lift(s: &Series<BigRational>) -> Self {
        s.map(|c| Poly::constant(c.clone()))
    }

    /// Substitutes a value for the second variable.
    pub fn at(&self, x: &BigRational) -> Series<BigRational> {
        self.map(|p| p.eval(x))
    }

    /// Partial derivative with respect to the second variable.
    pub fn d_second(&self) -> Self {
        self.map(Poly::derivative)
    }

    /// `[z^n x^k]`.
    pub fn coeff2(&self, n: usize, k: usize) -> BigRational {
        self.coeff(n).coeff(k)
    }
}

fn unrepresentable<C: Coeff>(op: &'static str, c: &C) -> SeriesError {
    SeriesError::Unrepresentable {
        op,
        value: format!("{c:?}"),
    }
}

impl<C: Coeff> Add for &Series<C> {
    type Output = Series<C>;
    fn add(self, rhs: &Series<C>) -> Series<C> {
        let order = self.order().min(rhs.order());
        Series {
            coeffs: (0..=order)
                .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
                .collect(),
        }
    }
}

impl<C: Coeff> Sub for &Series<C> {
    type Output = Series<C>;
    fn sub(self, rhs: &Series<C>) -> Series<C> {
        let order = self.order().min(rhs.order());
        Series {
            coeffs: (0..=order)
                .map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
                .collect(),
        }
    }
}

impl<C: Coeff> Mul for &Series<C> {
    type Output = Series<C>;
    fn mul(self, rhs: &Series<C>) -> Series<C> {
        let order = self.order().min(rhs.order());
        let mut out = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Series { coeffs: out }
    }
}

impl<C: Coeff> Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        self.map(|c| -c.clone())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl<C: Coeff> $tr for Series<C> {
            type Output = Series<C>;
            fn $f(self, rhs: Series<C>) -> Series<C> {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<C: Coeff> Neg for Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use num_traits::One;

    fn z(order: usize) -> RatSeries {
        Series::var(order)
    }

    #[test]
    fn exp_of_z() {
        let e = z(6).exp().unwrap();
        let expected: Vec<_> = [1, 1, 2, 6, 24, 120, 720]
            .iter()
            .map(|&d| rat(1, d))
            .collect();
        assert_eq!(e.coeffs(), expected.as_slice());
    }

    #[test]
    fn sqrt_binomial_series() {
        let s = (&Series::one(4) + &z(4)).pow(&rat(1, 2)).unwrap();
        assert_eq!(
            s.coeffs()[..4],
            [rat(1, 1), rat(1, 2), rat(-1, 8), rat(1, 16)]
        );
    }

    #[test]
    fn log1p_of_minus_z() {
        let l = (-z(5)).log1p().unwrap();
        let expected: Vec<_> = (0..=5)
            .map(|k| if k == 0 { rat(0, 1) } else { rat(-1, k) })
            .collect();
        assert_eq!(l.coeffs(), expected.as_slice());
    }

    #[test]
    fn log1p_rejects_nonzero_constant() {
        assert!(Series::<BigRational>::one(3).log1p().is_err());
    }

    #[test]
    fn pow_with_nonunit_constant() {
        let s = Series::new(vec![rat(4, 1), rat(4, 1), rat(1, 1)], 5);
        assert_eq!(
            s.pow(&rat(1, 2)).unwrap(),
            Series::new(vec![rat(2, 1), rat(1, 1)], 5)
        );
        let t = Series::new(vec![rat(2, 1), rat(1, 1)], 3);
        assert!(t.pow(&rat(1, 2)).is_err());
    }

    #[test]
    fn pow_with_positive_valuation() {
        // (z^2 (1+z)^2)^(1/2) = z + z^2
        let s = Series::new(
            vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(2, 1), rat(1, 1)],
            8,
        );
        let r = s.pow(&rat(1, 2)).unwrap();
        assert_eq!(r.order(), 7);
        assert_eq!(r, Series::new(vec![rat(0, 1), rat(1, 1), rat(1, 1)], 7));
        assert!(z(4).pow(&rat(1, 2)).is_err());
    }

    #[test]
    fn compose_geometric() {
        // 1/(1-w) at w = z/(1+z) is 1+z
        let geo = Series::new(vec![rat(1, 1); 6], 5);
        let inner = z(5).div(&(&Series::one(5) + &z(5))).unwrap();
        assert_eq!(geo.compose(&inner).unwrap(), &Series::one(5) + &z(5));
        assert!(geo.compose(&Series::one(5)).is_err());
    }

    #[test]
    fn truncation_to_min_order() {
        let a: RatSeries = Series::one(3);
        let b: RatSeries = Series::one(7);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn bivariate_helpers() {
        let x = Poly::x();
        let s: BiSeries = Series::new(vec![Poly::one(), x.clone(), x.clone() * x], 3);
        assert_eq!(s.coeff2(2, 2), rat(1, 1));
        assert_eq!(
            s.at(&rat(2, 1)).coeffs()[..3],
            [rat(1, 1), rat(2, 1), rat(4, 1)]
        );
        assert_eq!(s.d_second().coeff2(2, 1), rat(2, 1));
    }
}
