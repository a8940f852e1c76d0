use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::Rational;

/// Power series `sum_{n <= order} a_n x^n`; every coefficient up to the
/// truncation order is stored, including zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniSeries {
    coeffs: Vec<Rational>,
}

impl UniSeries {
    pub fn zero(order: usize) -> Self {
        UniSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(Rational::one(), 0, order)
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// `c x^k`, dropped entirely when `k > order`.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Build from coefficients, padding with zeros or truncating to `order`.
    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut v: Vec<Rational> = coeffs.into_iter().take(order + 1).collect();
        v.resize(order + 1, Rational::zero());
        UniSeries { coeffs: v }
    }

    pub fn from_integers(order: usize, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            order,
            coeffs.iter().map(|&c| Rational::from_integer(c.into())),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^n`. Panics if `n` is beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Rational {
        assert!(
            n <= self.order(),
            "coefficient of x^{n} requested from a series known to O(x^{})",
            self.order() + 1
        );
        self.coeffs[n].clone()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: Rational) {
        if n <= self.order() {
            self.coeffs[n] = c;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(order, self.coeffs.iter().cloned())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        UniSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for n in 0..=order {
            if n + k > order {
                break;
            }
            out.coeffs[n + k] = self.coeffs[n].clone();
        }
        out
    }

    /// Substitute `x -> x^m` (`m >= 1`).
    pub fn substitute_power(&self, m: usize) -> Self {
        assert!(m >= 1, "x -> x^0 is not a valid substitution");
        let order = self.order();
        let mut out = Self::zero(order);
        for n in 0..=order / m {
            out.coeffs[n * m] = self.coeffs[n].clone();
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Reads the series as an exponential generating function and returns
    /// `n! a_n` for every `n`.
    pub fn egf_counts(&self) -> Vec<Rational> {
        let mut fact = BigInt::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    fact *= n;
                }
                c * Rational::from_integer(fact.clone())
            })
            .collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Serialize for UniSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

impl Add for &UniSeries {
    type Output = UniSeries;
    fn add(self, rhs: &UniSeries) -> UniSeries {
        let order = self.order().min(rhs.order());
        UniSeries::from_coeffs(
            order,
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b),
        )
    }
}

impl Sub for &UniSeries {
    type Output = UniSeries;
    fn sub(self, rhs: &UniSeries) -> UniSeries {
        let order = self.order().min(rhs.order());
        UniSeries::from_coeffs(
            order,
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b),
        )
    }
}

impl Neg for &UniSeries {
    type Output = UniSeries;
    fn neg(self) -> UniSeries {
        UniSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &UniSeries {
    type Output = UniSeries;
    fn mul(self, rhs: &UniSeries) -> UniSeries {
        let order = self.order().min(rhs.order());
        let mut out = UniSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UniSeries {
            type Output = UniSeries;
            fn $m(self, rhs: UniSeries) -> UniSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&UniSeries> for UniSeries {
            type Output = UniSeries;
            fn $m(self, rhs: &UniSeries) -> UniSeries {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
