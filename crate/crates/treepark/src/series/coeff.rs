//! Coefficient rings for truncated power series.
//!
//! Exact work happens over [`BigRational`] and over [`Poly`] (polynomials in a
//! second variable). `f64` and [`Real`](crate::asymptotics::Real) are used by the
//! numeric routines.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring in which the series engine can compute.
///
/// The transcendental hooks act on constant terms only and return `None` when
/// the value is not representable in the ring (e.g. `exp(1)` over the rationals).
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: &BigRational) -> Self;

    fn inverse(&self) -> Option<Self>;

    fn exp_const(&self) -> Option<Self>;

    fn ln_const(&self) -> Option<Self>;

    fn pow_const(&self, p: &BigRational) -> Option<Self>;

    fn from_int(k: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(k)))
    }
}

impl Coeff for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn exp_const(&self) -> Option<Self> {
        self.is_zero().then(BigRational::one)
    }

    fn ln_const(&self) -> Option<Self> {
        self.is_one().then(BigRational::zero)
    }

    fn pow_const(&self, p: &BigRational) -> Option<Self> {
        rational_pow(self, p)
    }
}

/// Exact `r^p` when the result is rational.
pub fn rational_pow(r: &BigRational, p: &BigRational) -> Option<BigRational> {
    let num = p.numer().to_i64()?;
    let den = p.denom().to_u32()?;
    if r.is_zero() {
        return (num > 0).then(BigRational::zero);
    }
    let base = if num < 0 { r.recip() } else { r.clone() };
    let powered = num_traits::pow(base, num.unsigned_abs() as usize);
    if den == 1 {
        return Some(powered);
    }
    let a = exact_root(powered.numer(), den)?;
    let b = exact_root(powered.denom(), den)?;
    Some(BigRational::new(a, b))
}

fn exact_root(x: &BigInt, k: u32) -> Option<BigInt> {
    if x.sign() == Sign::Minus && k.is_multiple_of(2) {
        return None;
    }
    let root = num_integer::Roots::nth_root(&x.abs(), k);
    if num_traits::pow(root.clone(), k as usize) == x.abs() {
        Some(if x.is_negative() { -root } else { root })
    } else {
        None
    }
}

impl Coeff for f64 {
    fn from_rational(r: &BigRational) -> Self {
        crate::numeric::rational_to_f64(r)
    }

    fn inverse(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }

    fn exp_const(&self) -> Option<Self> {
        Some(self.exp())
    }

    fn ln_const(&self) -> Option<Self> {
        (*self > 0.0).then(|| self.ln())
    }

    fn pow_const(&self, p: &BigRational) -> Option<Self> {
        let e = crate::numeric::rational_to_f64(p);
        if *self > 0.0 {
            Some(self.powf(e))
        } else if p.is_integer() {
            Some(self.powi(p.to_integer().to_i32()?))
        } else {
            None
        }
    }
}

/// Dense polynomial with exact rational coefficients in one variable.
///
/// Trailing zero coefficients are never stored, so the zero polynomial is the
/// empty vector and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        Poly::new(long)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(BigRational::one())
    }
}

impl Coeff for Poly {
    fn from_rational(r: &BigRational) -> Self {
        Poly::constant(r.clone())
    }

    fn inverse(&self) -> Option<Self> {
        self.as_constant()?.inverse().map(Poly::constant)
    }

    fn exp_const(&self) -> Option<Self> {
        self.as_constant()?.exp_const().map(Poly::constant)
    }

    fn ln_const(&self) -> Option<Self> {
        self.as_constant()?.ln_const().map(Poly::constant)
    }

    fn pow_const(&self, p: &BigRational) -> Option<Self> {
        if self.is_one() {
            return Some(Poly::one());
        }
        if p.is_integer() && !p.is_negative() {
            let k = p.to_integer().to_usize()?;
            return Some(num_traits::pow(self.clone(), k));
        }
        self.as_constant()?.pow_const(p).map(Poly::constant)
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
