//! Exact integer and rational helpers shared by the counting routes.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Generalized binomial `a(a-1)…(a-k+1)/k!` for a rational upper argument.
pub fn gbinom(a: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (a - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

pub fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn big(k: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(k.clone()))
}

/// Converts a rational to a non-negative integer if it is one.
pub fn to_count(r: &BigRational) -> Option<BigUint> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_biguint()
    } else {
        None
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `num/den` as a double without overflowing either operand.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    rational_to_f64(&BigRational::new(num.clone().into(), den.clone().into()))
}

pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// Large Schröder numbers `1, 2, 6, 22, 90, …` via the three-term recurrence.
pub fn schroder(n: usize) -> BigUint {
    let mut s = vec![BigUint::one(), BigUint::from(2u32)];
    for k in 2..=n {
        let next = (BigUint::from(6 * k - 3) * &s[k - 1] - BigUint::from(k - 2) * &s[k - 2])
            / BigUint::from(k + 1);
        s.push(next);
    }
    s.swap_remove(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(binomial(6, 2), BigUint::from(15u32));
        assert_eq!(binomial(2, 3), BigUint::zero());
        let c: Vec<u32> = (0..7).map(|n| catalan(n).to_u32().unwrap()).collect();
        assert_eq!(c, [1, 1, 2, 5, 14, 42, 132]);
        let s: Vec<u32> = (0..7).map(|n| schroder(n).to_u32().unwrap()).collect();
        assert_eq!(s, [1, 2, 6, 22, 90, 394, 1806]);
    }

    #[test]
    fn generalized_binomial() {
        assert_eq!(gbinom(&int(-1), 3), int(-1));
        assert_eq!(gbinom(&int(-2), 2), int(3));
        assert_eq!(gbinom(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(gbinom(&int(5), 7), int(0));
        for n in 0..8 {
            for k in 0..8 {
                assert_eq!(gbinom(&int(n as i64), k), big(&binomial(n, k)));
            }
        }
    }

    #[test]
    fn huge_ratio() {
        let a = factorial(300);
        let b = factorial(299) * BigUint::from(4u32);
        assert!((ratio_to_f64(&a, &b) - 75.0).abs() < 1e-12);
    }
}
