//! Binary floating point at a configurable working precision.
//!
//! Precision lives in a thread-local so that `Real` can implement [`Coeff`],
//! whose constructors take no context.

use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float_num::{BigFloat, Consts, Radix, RoundingMode};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::series::Coeff;

/// Working precision in bits used when nothing else is requested.
pub const DEFAULT_BITS: usize = 320;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static BITS: Cell<usize> = const { Cell::new(DEFAULT_BITS) };
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn bits() -> usize {
    BITS.with(Cell::get)
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Bits needed for `digits` significant decimal digits, with guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    let raw = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize + 64;
    raw.div_ceil(64) * 64
}

/// Runs `f` with the working precision set to `bits`, restoring it afterwards.
pub fn with_precision<T>(bits: usize, f: impl FnOnce() -> T) -> T {
    struct Restore(usize);
    impl Drop for Restore {
        fn drop(&mut self) {
            BITS.with(|b| b.set(self.0));
        }
    }
    let _restore = Restore(BITS.with(|b| b.replace(bits.max(64))));
    f()
}

#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn from_i64(k: i64) -> Real {
        Real(BigFloat::from_i64(k, bits()))
    }

    pub fn ratio(a: i64, b: i64) -> Real {
        Real::from_i64(a) / Real::from_i64(b)
    }

    pub fn from_f64(x: f64) -> Real {
        Real(BigFloat::from_f64(x, bits()))
    }

    fn parse(s: &str) -> Real {
        Real(with_consts(|cc| {
            BigFloat::parse(s, Radix::Dec, bits(), RM, cc)
        }))
    }

    pub fn pi() -> Real {
        Real(with_consts(|cc| cc.pi(bits(), RM)))
    }

    pub fn sqrt(&self) -> Real {
        Real(self.0.sqrt(bits(), RM))
    }

    pub fn exp(&self) -> Real {
        Real(with_consts(|cc| self.0.exp(bits(), RM, cc)))
    }

    pub fn ln(&self) -> Real {
        Real(with_consts(|cc| self.0.ln(bits(), RM, cc)))
    }

    /// `self^e` for positive `self`.
    pub fn powf(&self, e: &Real) -> Real {
        Real(with_consts(|cc| self.0.pow(&e.0, bits(), RM, cc)))
    }

    /// `self^(a/b)`; negative bases only for integral exponents.
    pub fn pow_ratio(&self, a: i64, b: i64) -> Real {
        if b == 1 || a % b == 0 {
            return self.powi(a / b);
        }
        self.powf(&Real::ratio(a, b))
    }

    pub fn powi(&self, k: i64) -> Real {
        let p = Real(self.0.powi(k.unsigned_abs() as usize, bits(), RM));
        if k < 0 {
            p.recip()
        } else {
            p
        }
    }

    pub fn recip(&self) -> Real {
        Real(self.0.reciprocal(bits(), RM))
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        self.decimal().parse().unwrap_or(f64::NAN)
    }

    /// Full decimal expansion at the working precision, in scientific notation.
    pub fn decimal(&self) -> String {
        with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    /// Scientific notation with `digits` significant digits, truncated.
    pub fn to_sci(&self, digits: usize) -> String {
        let s = self.decimal();
        let Some((mantissa, exponent)) = s.split_once('e') else {
            return s;
        };
        let (sign, body) = match mantissa.strip_prefix('-') {
            Some(rest) => ("-", rest),
            None => ("", mantissa),
        };
        let kept: String = body.chars().take(digits.max(1) + 1).collect();
        let kept = kept.trim_end_matches('.');
        format!("{sign}{kept}e{exponent}")
    }

    /// Positional notation with `digits` significant digits, rounded half up.
    pub fn to_fixed(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        let sci = self.decimal();
        let Some((mantissa, exponent)) = sci.split_once('e') else {
            return sci;
        };
        let Ok(mut exponent) = exponent.parse::<i64>() else {
            return sci;
        };
        let (sign, body) = match mantissa.strip_prefix('-') {
            Some(rest) => ("-", rest),
            None => ("", mantissa),
        };
        let all: Vec<u8> = body
            .bytes()
            .filter(u8::is_ascii_digit)
            .map(|b| b - b'0')
            .collect();
        let digits = digits.max(1);
        let mut kept: Vec<u8> = all.iter().copied().take(digits).collect();
        if all.get(digits).is_some_and(|d| *d >= 5) {
            let mut i = kept.len();
            loop {
                if i == 0 {
                    kept.insert(0, 1);
                    kept.pop();
                    exponent += 1;
                    break;
                }
                i -= 1;
                if kept[i] == 9 {
                    kept[i] = 0;
                } else {
                    kept[i] += 1;
                    break;
                }
            }
        }
        while kept.len() > 1 && kept.last() == Some(&0) {
            kept.pop();
        }
        if kept.iter().all(|d| *d == 0) {
            return "0".into();
        }
        let mut body: String = kept.iter().map(|d| char::from(b'0' + d)).collect();
        // Position of the decimal point relative to the start of `body`.
        let point = exponent + 1;
        let out = if point <= 0 {
            format!("0.{}{body}", "0".repeat(point.unsigned_abs() as usize))
        } else {
            let point = point as usize;
            if body.len() <= point {
                body.push_str(&"0".repeat(point - body.len()));
                body
            } else {
                format!("{}.{}", &body[..point], &body[point..])
            }
        };
        format!("{sign}{out}")
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_sci(p)),
            None => f.write_str(&self.decimal()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                Real(self.0.$m(&rhs.0, bits(), RM))
            }
        }

        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real(self.0.$m(&rhs.0, bits(), RM))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.neg())
    }
}

impl Zero for Real {
    fn zero() -> Real {
        Real::from_i64(0)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Real {
    fn one() -> Real {
        Real::from_i64(1)
    }
}

impl Coeff for Real {
    fn from_rational(r: &BigRational) -> Real {
        let part = |x: &num_bigint::BigInt| match x.to_i64() {
            Some(k) => Real::from_i64(k),
            None => Real::parse(&x.to_string()),
        };
        part(r.numer()) / part(r.denom())
    }

    fn inverse(&self) -> Option<Real> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn exp_const(&self) -> Option<Real> {
        Some(self.exp())
    }

    fn ln_const(&self) -> Option<Real> {
        (!self.is_negative() && !self.is_zero()).then(|| self.ln())
    }

    fn pow_const(&self, p: &BigRational) -> Option<Real> {
        if p.is_integer() {
            return p.to_integer().to_i64().map(|k| self.powi(k));
        }
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return (p > &BigRational::zero()).then(Real::zero);
        }
        Some(self.powf(&Real::from_rational(p)))
    }

    fn from_int(k: i64) -> Real {
        Real::from_i64(k)
    }
}
