//! Fixed-point equations `Q = z·φ(Q)` and Lagrange–Bürmann extraction.

use num_rational::BigRational;
use num_traits::Zero;

use super::{Coeff, Env, Expr, Series, SeriesError};
use crate::numeric::int;

/// Solves `Q = z·φ(Q)` to order `order` by order-by-order iteration.
///
/// `u` binds the second variable when `φ` mentions it.
pub fn solve_fixed_point<C: Coeff>(
    phi: &Expr,
    order: usize,
    u: Option<&C>,
) -> Result<Series<C>, SeriesError> {
    let at_zero = phi.eval(&env(Series::zero(0), u))?;
    if at_zero.coeff(0).is_zero() {
        return Err(SeriesError::NoAdmissibleSolution);
    }
    solve_implicit(&(Expr::z() * phi.clone()), order, u)
}

/// Solves `Q = F(z, Q, u)` for the unique `Q` with `Q(0) = 0`.
///
/// `F(0, Q, u)` must vanish identically, which is checked on the first
/// iterate; each round then fixes at least one more coefficient. Round `k`
/// works at order `k` only, so early rounds are cheap.
pub fn solve_implicit<C: Coeff>(
    rhs: &Expr,
    order: usize,
    u: Option<&C>,
) -> Result<Series<C>, SeriesError> {
    let mut q = Series::zero(0);
    if !rhs.eval(&env(q.clone(), u))?.coeff(0).is_zero() {
        return Err(SeriesError::NotContracting);
    }
    for k in 1..=order {
        let prev = Series::new(q.into_coeffs(), k);
        q = rhs.eval(&env(prev, u))?;
    }
    let check = rhs.eval(&env(q.clone(), u))?;
    if check != q {
        return Err(SeriesError::NotContracting);
    }
    Ok(q)
}

/// `[z^n] H(Q(z))` for `Q = z·φ(Q)`, as `(1/n)·[w^{n-1}] H'(w)·φ(w)^n`.
///
/// Both `h` and `phi` are expressions in `Q`, read here as the variable `w`.
pub fn lagrange_coefficient<C: Coeff>(
    h: &Expr,
    phi: &Expr,
    n: usize,
    u: Option<&C>,
) -> Result<C, SeriesError> {
    assert!(n >= 1, "Lagrange extraction needs n >= 1");
    let w = Series::var(n);
    let h_prime = h.eval(&env(w.clone(), u))?.derivative();
    let phi_n = phi.eval(&env(w.truncate(n - 1), u))?.powi(n as i64)?;
    let c = (&h_prime * &phi_n).coeff(n - 1);
    Ok(c * C::from_rational(&(int(1) / int(n as i64))))
}

fn env<C: Coeff>(q: Series<C>, u: Option<&C>) -> Env<C> {
    let mut e = Env::with_q(q);
    e.u = u.cloned();
    e
}

/// `[z^n]Q` for every `n ≤ order` through [`lagrange_coefficient`].
pub fn lagrange_series(phi: &Expr, order: usize) -> Result<Series<BigRational>, SeriesError> {
    let mut coeffs = vec![BigRational::zero()];
    for n in 1..=order {
        coeffs.push(lagrange_coefficient(&Expr::q(), phi, n, None)?);
    }
    Ok(Series::new(coeffs, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{catalan, factorial, rat};
    use crate::series::{Poly, RatSeries};
    use num_bigint::BigInt;

    fn cayley(n: usize) -> BigRational {
        BigRational::new(
            BigInt::from(n).pow(n as u32 - 1),
            BigInt::from(factorial(n)),
        )
    }

    #[test]
    fn cayley_tree_function() {
        let phi = Expr::q().exp();
        let q: RatSeries = solve_fixed_point(&phi, 10, None).unwrap();
        for n in 1..=10 {
            assert_eq!(q.coeff(n), cayley(n));
        }
        assert_eq!(q.coeff(3), rat(3, 2));
        let l: BigRational = lagrange_coefficient(&Expr::q(), &phi, 4, None).unwrap();
        assert_eq!(l, rat(8, 3));
    }

    #[test]
    fn catalan_from_binary_weights() {
        let phi = (1 + Expr::q()).powi(2);
        let q: RatSeries = solve_fixed_point(&phi, 12, None).unwrap();
        for n in 1..=12 {
            assert_eq!(q.coeff(n), crate::numeric::big(&catalan(n)));
        }
        let l: BigRational = lagrange_coefficient(&Expr::q(), &phi, 2, None).unwrap();
        assert_eq!(l, rat(2, 1));
    }

    #[test]
    fn iteration_matches_lagrange() {
        let phi = (1 + Expr::q()).powi(2) * Expr::q().exp();
        let q: RatSeries = solve_fixed_point(&phi, 15, None).unwrap();
        assert_eq!(q.coeff(3), rat(25, 2));
        assert_eq!(q, lagrange_series(&phi, 15).unwrap());
    }

    #[test]
    fn lagrange_for_a_function_of_q() {
        // G' for ordered trees is (1+Q)/(1-Q)^2 with Q = z(1+Q)^2 e^Q
        let phi = (1 + Expr::q()).powi(2) * Expr::q().exp();
        let h = (1 + Expr::q()) / (1 - Expr::q()).powi(2);
        let c: BigRational = lagrange_coefficient(&h, &phi, 2, None).unwrap();
        assert_eq!(c, rat(14, 1));
    }

    #[test]
    fn zero_phi_has_no_solution() {
        let r: Result<RatSeries, _> = solve_fixed_point(&Expr::q(), 5, None);
        assert_eq!(r, Err(SeriesError::NoAdmissibleSolution));
    }

    #[test]
    fn non_contracting_rhs_rejected() {
        let r: Result<RatSeries, _> = solve_implicit(&(Expr::q() + 1), 5, None);
        assert_eq!(r, Err(SeriesError::NotContracting));
    }

    #[test]
    fn bivariate_fixed_point_specializes() {
        // u = 0 in (1+Q+uQ(1-Q))^2 e^Q gives the ordered-trees weight of the
        // univariate solution.
        let q = Expr::q();
        let phi2 =
            (1 + q.clone() + Expr::u() * q.clone() * (1 - q.clone())).powi(2) * q.clone().exp();
        let phi1 = (1 + q.clone()).powi(2) * q.exp();
        let bi: Series<Poly> = solve_fixed_point(&phi2, 8, Some(&Poly::x())).unwrap();
        let uni: RatSeries = solve_fixed_point(&phi1, 8, None).unwrap();
        assert_eq!(bi.at(&rat(0, 1)), uni);
        for n in 1..=8 {
            assert!(bi.coeff(n).degree().unwrap_or(0) <= n);
        }
    }
}
