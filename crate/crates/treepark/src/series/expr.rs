//! Small expression language for catalog formulas.
//!
//! An [`Expr`] is a closed-form expression in the auxiliary series `Q`, the
//! variable `z` and a second variable `u`. The same expression is evaluated over
//! exact univariate series, bivariate series and Taylor expansions at a real
//! point.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Coeff, Series, SeriesError};
use crate::numeric::{int, rat};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(BigRational),
    Q,
    Z,
    U,
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, BigRational),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
}

/// Values bound to the variables of an expression.
#[derive(Clone, Debug)]
pub struct Env<C> {
    pub q: Series<C>,
    pub z: Option<Series<C>>,
    pub u: Option<C>,
}

impl<C: Coeff> Env<C> {
    /// Binds `Q`, with `z` the series variable at the same order.
    pub fn with_q(q: Series<C>) -> Self {
        let z = Series::var(q.order());
        Env {
            q,
            z: Some(z),
            u: None,
        }
    }

    pub fn u(mut self, u: C) -> Self {
        self.u = Some(u);
        self
    }
}

impl Expr {
    pub fn q() -> Expr {
        Expr::Q
    }

    pub fn z() -> Expr {
        Expr::Z
    }

    pub fn u() -> Expr {
        Expr::U
    }

    pub fn int(k: i64) -> Expr {
        Expr::Const(int(k))
    }

    pub fn rat(a: i64, b: i64) -> Expr {
        Expr::Const(rat(a, b))
    }

    pub fn pow(self, p: BigRational) -> Expr {
        Expr::Pow(Box::new(self), p)
    }

    pub fn powi(self, k: i64) -> Expr {
        self.pow(int(k))
    }

    pub fn sqrt(self) -> Expr {
        self.pow(rat(1, 2))
    }

    pub fn recip(self) -> Expr {
        self.powi(-1)
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }

    /// Whether the variable occurs in the expression.
    pub fn mentions(&self, var: &Expr) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Q | Expr::Z | Expr::U => self == var,
            Expr::Sum(xs) | Expr::Prod(xs) => xs.iter().any(|x| x.mentions(var)),
            Expr::Neg(x) | Expr::Pow(x, _) | Expr::Exp(x) | Expr::Ln(x) => x.mentions(var),
        }
    }

    pub fn eval<C: Coeff>(&self, env: &Env<C>) -> Result<Series<C>, SeriesError> {
        let order = env.q.order();
        Ok(match self {
            Expr::Const(c) => Series::constant(C::from_rational(c), order),
            Expr::Q => env.q.clone(),
            Expr::Z => env.z.clone().ok_or(SeriesError::UnboundVariable("z"))?,
            Expr::U => Series::constant(
                env.u.clone().ok_or(SeriesError::UnboundVariable("u"))?,
                order,
            ),
            Expr::Sum(xs) => {
                let mut acc = Series::zero(order);
                for x in xs {
                    acc = &acc + &x.eval(env)?;
                }
                acc
            }
            Expr::Prod(xs) => {
                let mut acc = Series::one(order);
                for x in xs {
                    acc = &acc * &x.eval(env)?;
                }
                acc
            }
            Expr::Neg(x) => -x.eval(env)?,
            Expr::Pow(x, p) => x.eval(env)?.pow(p)?,
            Expr::Exp(x) => x.eval(env)?.exp()?,
            Expr::Ln(x) => x.eval(env)?.ln()?,
        })
    }
}

impl From<i64> for Expr {
    fn from(k: i64) -> Expr {
        Expr::int(k)
    }
}

impl From<BigRational> for Expr {
    fn from(c: BigRational) -> Expr {
        Expr::Const(c)
    }
}

impl<T: Into<Expr>> Add<T> for Expr {
    type Output = Expr;
    fn add(self, rhs: T) -> Expr {
        match (self, rhs.into()) {
            (Expr::Sum(mut xs), Expr::Sum(ys)) => {
                xs.extend(ys);
                Expr::Sum(xs)
            }
            (Expr::Sum(mut xs), y) => {
                xs.push(y);
                Expr::Sum(xs)
            }
            (x, y) => Expr::Sum(vec![x, y]),
        }
    }
}

impl<T: Into<Expr>> Sub<T> for Expr {
    type Output = Expr;
    fn sub(self, rhs: T) -> Expr {
        self + (-rhs.into())
    }
}

impl<T: Into<Expr>> Mul<T> for Expr {
    type Output = Expr;
    fn mul(self, rhs: T) -> Expr {
        match (self, rhs.into()) {
            (Expr::Prod(mut xs), Expr::Prod(ys)) => {
                xs.extend(ys);
                Expr::Prod(xs)
            }
            (Expr::Prod(mut xs), y) => {
                xs.push(y);
                Expr::Prod(xs)
            }
            (x, y) => Expr::Prod(vec![x, y]),
        }
    }
}

impl<T: Into<Expr>> Div<T> for Expr {
    type Output = Expr;
    // Division is multiplication by a reciprocal node.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: T) -> Expr {
        self * rhs.into().recip()
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Neg(x) => *x,
            x => Expr::Neg(Box::new(x)),
        }
    }
}

macro_rules! scalar_lhs {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Expr> for i64 {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                Expr::int(self).$f(rhs)
            }
        }
    )*};
}
scalar_lhs!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_integer() && !c.is_negative() => write!(f, "{c}"),
            Expr::Const(c) => write!(f, "({c})"),
            Expr::Q => write!(f, "Q"),
            Expr::Z => write!(f, "z"),
            Expr::U => write!(f, "u"),
            Expr::Sum(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    match (i, x) {
                        (0, x) => write!(f, "{x}")?,
                        (_, Expr::Neg(y)) => write!(f, " - {y}")?,
                        (_, x) => write!(f, " + {x}")?,
                    }
                }
                write!(f, ")")
            }
            Expr::Prod(xs) => {
                let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join("*"))
            }
            Expr::Neg(x) => write!(f, "-{x}"),
            Expr::Pow(x, p) if p.is_one() => write!(f, "{x}"),
            Expr::Pow(x, p) if p == &rat(1, 2) => write!(f, "sqrt{x}"),
            Expr::Pow(x, p) if p.is_integer() && p.to_integer().to_i64().is_some() => {
                write!(f, "{x}^{p}")
            }
            Expr::Pow(x, p) => write!(f, "{x}^({p})"),
            Expr::Exp(x) => write!(f, "exp{}", paren(x)),
            Expr::Ln(x) => write!(f, "ln{}", paren(x)),
        }
    }
}

fn paren(x: &Expr) -> String {
    match x {
        Expr::Sum(_) => x.to_string(),
        _ => format!("({x})"),
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::Const(BigRational::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::RatSeries;

    #[test]
    fn evaluates_against_direct_series() {
        let order = 8;
        let z: RatSeries = Series::var(order);
        let e = (1 + Expr::q()).powi(2) * Expr::q().exp() - Expr::int(1);
        let got = e.eval(&Env::with_q(z.clone())).unwrap();
        let one = Series::one(order);
        let direct = &(&(&one + &z) * &(&one + &z)) * &z.exp().unwrap();
        assert_eq!(got, &direct - &one);
    }

    #[test]
    fn unbound_variables_are_errors() {
        let env = Env::with_q(RatSeries::var(3));
        assert_eq!(Expr::u().eval(&env), Err(SeriesError::UnboundVariable("u")));
    }

    #[test]
    fn display_is_readable() {
        let e = (1 - Expr::q()).ln() + 2 * Expr::q();
        assert_eq!(e.to_string(), "(ln(1 - Q) + 2*Q)");
        assert!(e.mentions(&Expr::Q));
        assert!(!e.mentions(&Expr::Z));
    }
}
