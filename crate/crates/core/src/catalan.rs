//! Extended Catalan numbers and powers of the series `A(x)`.
//!
//! `A` is the species of rooted triangulations of polygons, characterised by
//! `A = 1 + X A^2`. Its coefficients are the Catalan numbers and the
//! coefficient of `x^n` in `A^k(x)` is written `c_n^(k)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::series::UniSeries;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalanError {
    #[error("power k must be at least 1, got {0}")]
    InvalidPower(u64),
}

/// Index fed to the extended Catalan function. Any rational is accepted;
/// only nonnegative integers give a nonzero value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedCatalanIndex(Rational);

impl ExtendedCatalanIndex {
    pub fn new(value: Rational) -> Self {
        ExtendedCatalanIndex(value)
    }

    /// The index `num / den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        ExtendedCatalanIndex(Rational::new(num.into(), den.into()))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `Some(n)` when the index is the nonnegative integer `n`.
    pub fn as_natural(&self) -> Option<u64> {
        if self.0.is_integer() && !self.0.is_negative() {
            self.0.to_integer().to_u64()
        } else {
            None
        }
    }
}

impl From<i64> for ExtendedCatalanIndex {
    fn from(n: i64) -> Self {
        ExtendedCatalanIndex(Rational::from_integer(n.into()))
    }
}

impl From<u64> for ExtendedCatalanIndex {
    fn from(n: u64) -> Self {
        ExtendedCatalanIndex(Rational::from_integer(n.into()))
    }
}

impl From<Rational> for ExtendedCatalanIndex {
    fn from(r: Rational) -> Self {
        ExtendedCatalanIndex(r)
    }
}

impl fmt::Display for ExtendedCatalanIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Binomial coefficient, zero when `b < 0`, `b > a` or `a < 0`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

fn catalan_natural(n: u64) -> BigInt {
    let n = n as i64;
    binomial(2 * n, n) / (n + 1)
}

/// Extended Catalan number: `binomial(2n, n) / (n + 1)` when the index is a
/// nonnegative integer `n`, and 0 otherwise.
pub fn catalan(r: impl Into<ExtendedCatalanIndex>) -> BigInt {
    match r.into().as_natural() {
        Some(n) => catalan_natural(n),
        None => BigInt::zero(),
    }
}

/// Shorthand for `catalan(num / den)`, the form in which fractional indices
/// such as `c_{(k-1)/3}` appear in the coefficient formulas.
pub fn cat(num: i64, den: i64) -> BigInt {
    assert!(den > 0, "denominator must be positive");
    if num < 0 || !num.is_multiple_of(&den) {
        BigInt::zero()
    } else {
        catalan_natural((num / den) as u64)
    }
}

/// `catalan(num / den)` as a rational, for use in mixed formulas.
pub fn catq(num: i64, den: i64) -> Rational {
    Rational::from_integer(cat(num, den))
}

/// The series `A(x)` truncated at `x^order`.
///
/// Coefficients are produced by the convolution `c_{n+1} = sum c_i c_{n-i}`,
/// which is the functional equation `A = 1 + x A^2` read coefficientwise.
pub fn a_series(order: usize) -> UniSeries {
    let mut c: Vec<BigInt> = Vec::with_capacity(order + 1);
    c.push(BigInt::one());
    for n in 0..order {
        let next = (0..=n).map(|i| &c[i] * &c[n - i]).sum();
        c.push(next);
    }
    UniSeries::from_coeffs(order, c.into_iter().map(Rational::from_integer))
}

/// Strategy used by [`catalan_power`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PowerMethod {
    /// `sum_i (-1)^i C(k-1-i, i) c_{n+k-1-i}`.
    AlternatingSum,
    /// `(k/n) C(2n-1+k, n-1)`, with `c_0^(k) = 1`.
    ClosedForm,
    /// Coefficient extraction from the truncated product `A(x)^k`.
    SeriesProduct,
}

impl PowerMethod {
    pub const ALL: [PowerMethod; 3] = [
        PowerMethod::AlternatingSum,
        PowerMethod::ClosedForm,
        PowerMethod::SeriesProduct,
    ];
}

/// `c_n^(k)`, the coefficient of `x^n` in `A(x)^k`.
pub fn catalan_power(n: u64, k: u64, method: PowerMethod) -> Result<BigInt, CatalanError> {
    if k < 1 {
        return Err(CatalanError::InvalidPower(k));
    }
    let (ni, ki) = (n as i64, k as i64);
    let value = match method {
        PowerMethod::AlternatingSum => {
            let mut acc = BigInt::zero();
            for i in 0..=(ki - 1) / 2 {
                let term = binomial(ki - 1 - i, i) * cat(ni + ki - 1 - i, 1);
                if i % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        PowerMethod::ClosedForm => {
            if n == 0 {
                BigInt::one()
            } else {
                binomial(2 * ni - 1 + ki, ni - 1) * ki / ni
            }
        }
        PowerMethod::SeriesProduct => {
            let a = a_series(n as usize);
            a.pow(k as u32).coeff(n as usize).to_integer()
        }
    };
    Ok(value)
}

/// `c_x^(k)` at a possibly fractional index `num / den` (0 when fractional or
/// negative), computed by the closed form.
pub fn catalan_power_at(num: i64, den: i64, k: u64) -> BigInt {
    if num < 0 || !num.is_multiple_of(&den) {
        return BigInt::zero();
    }
    catalan_power((num / den) as u64, k, PowerMethod::ClosedForm).expect("k >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_small_values() {
        assert_eq!(catalan(4i64), BigInt::from(14));
        assert_eq!(catalan(0i64), BigInt::from(1));
        assert_eq!(catalan(ExtendedCatalanIndex::ratio(5, 2)), BigInt::zero());
        assert_eq!(catalan(-3i64), BigInt::zero());
        assert_eq!(cat(6, 3), BigInt::from(2));
        assert_eq!(cat(7, 3), BigInt::zero());
        assert_eq!(cat(-2, 2), BigInt::zero());
    }

    #[test]
    fn binomial_is_total() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(4, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    // Fixpoint iteration S <- 1 + x S^2, independent of the convolution used
    // by `a_series`.
    fn a_by_iteration(order: usize) -> UniSeries {
        let one = UniSeries::one(order);
        let x = UniSeries::x(order);
        let mut s = one.clone();
        for _ in 0..=order {
            s = &one + &(&x * &(&s * &s));
        }
        s
    }

    #[test]
    fn a_series_examples() {
        let a6: Vec<i64> = vec![1, 1, 2, 5, 14, 42, 132];
        assert_eq!(a_series(6), UniSeries::from_integers(6, &a6));
        assert_eq!(a_series(0), UniSeries::from_integers(0, &[1]));
        assert_eq!(a_series(8), a_by_iteration(8));
        assert_eq!(a_series(8).coeff(8), Rational::from_integer(1430.into()));
    }

    #[test]
    fn a_squared_is_shifted_a() {
        let order = 40;
        let a = a_series(order + 1);
        let lhs = (&a * &a).truncate(order);
        let rhs = UniSeries::from_coeffs(order, (1..=order + 1).map(|n| a.coeff(n)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn catalan_power_examples() {
        for m in PowerMethod::ALL {
            assert_eq!(catalan_power(2, 3, m).unwrap(), BigInt::from(9));
            assert_eq!(catalan_power(0, 5, m).unwrap(), BigInt::one());
            for n in 0..20 {
                assert_eq!(catalan_power(n, 2, m).unwrap(), catalan(n + 1));
            }
        }
        assert_eq!(
            catalan_power(3, 0, PowerMethod::ClosedForm),
            Err(CatalanError::InvalidPower(0))
        );
    }

    #[test]
    fn power_methods_agree() {
        for k in 1..=10 {
            for n in 0..=50 {
                let a = catalan_power(n, k, PowerMethod::AlternatingSum).unwrap();
                let b = catalan_power(n, k, PowerMethod::ClosedForm).unwrap();
                assert_eq!(a, b, "n={n} k={k}");
            }
            let order = 50;
            let pk = a_series(order).pow(k as u32);
            for n in 0..=order {
                let b = catalan_power(n as u64, k, PowerMethod::ClosedForm).unwrap();
                assert_eq!(pk.coeff(n).to_integer(), b);
            }
        }
    }

    #[test]
    fn power_convolution() {
        for j in 1..5u64 {
            for k in 1..5u64 {
                for n in 0..25u64 {
                    let lhs = catalan_power(n, j + k, PowerMethod::ClosedForm).unwrap();
                    let rhs: BigInt = (0..=n)
                        .map(|a| {
                            catalan_power(a, j, PowerMethod::ClosedForm).unwrap()
                                * catalan_power(n - a, k, PowerMethod::ClosedForm).unwrap()
                        })
                        .sum();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
