use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use super::UniSeries;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("operands have different sort counts ({0:?} vs {1:?})")]
    SortMismatch(Sorts, Sorts),
    #[error("operation requires a one-sort series")]
    NotOneSort,
    #[error("series has y-variables but no substitution for the second sort was given")]
    MissingSecondSort,
}

/// Number of sorts of the species whose index series this is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sorts {
    One,
    Two,
}

impl Sorts {
    pub fn count(self) -> u8 {
        match self {
            Sorts::One => 1,
            Sorts::Two => 2,
        }
    }
}

/// A power-sum variable, 1-based: `X(1)` is `x_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(u32),
    Y(u32),
}

impl Var {
    pub fn index(self) -> u32 {
        match self {
            Var::X(i) | Var::Y(i) => i,
        }
    }
}

/// How an index series is collapsed to a univariate series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Specialization {
    /// `x_1 -> x`, `x_i -> 0` for `i >= 2`.
    Labelled,
    /// `x_i -> x^i` applied to a cycle index series.
    Unlabelled,
    /// `x_i -> x^i` applied to an asymmetry index series.
    AsymmetricBar,
}

/// Monomial `prod x_i^{a_i} prod y_j^{b_j}`; exponent vectors are stored
/// without trailing zeros so that equal monomials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    x: Vec<u32>,
    y: Vec<u32>,
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn vec_weight(v: &[u32]) -> u32 {
    v.iter().enumerate().map(|(i, &e)| (i as u32 + 1) * e).sum()
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        let mut m = Monomial::one();
        m.set_exp(v, e);
        m
    }

    /// Build from `(variable, exponent)` pairs; repeated variables multiply.
    pub fn from_pairs(pairs: &[(Var, u32)]) -> Self {
        pairs.iter().fold(Monomial::one(), |m, &(v, e)| {
            m.mul(&Monomial::var_pow(v, e))
        })
    }

    fn set_exp(&mut self, v: Var, e: u32) {
        let (vec, i) = match v {
            Var::X(i) => (&mut self.x, i),
            Var::Y(i) => (&mut self.y, i),
        };
        assert!(i >= 1, "variables are 1-based");
        let idx = (i - 1) as usize;
        if vec.len() <= idx {
            vec.resize(idx + 1, 0);
        }
        vec[idx] = e;
        trim(vec);
    }

    pub fn exp(&self, v: Var) -> u32 {
        let (vec, i) = match v {
            Var::X(i) => (&self.x, i),
            Var::Y(i) => (&self.y, i),
        };
        vec.get((i - 1) as usize).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u32 {
        vec_weight(&self.x) + vec_weight(&self.y)
    }

    pub fn x_weight(&self) -> u32 {
        vec_weight(&self.x)
    }

    pub fn y_weight(&self) -> u32 {
        vec_weight(&self.y)
    }

    pub fn has_y(&self) -> bool {
        !self.y.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_empty() && self.y.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        fn add(a: &[u32], b: &[u32]) -> Vec<u32> {
            let mut out = vec![0; a.len().max(b.len())];
            for (i, e) in a.iter().enumerate() {
                out[i] += e;
            }
            for (i, e) in b.iter().enumerate() {
                out[i] += e;
            }
            out
        }
        Monomial {
            x: add(&self.x, &other.x),
            y: add(&self.y, &other.y),
        }
    }

    /// Nonzero `(variable, exponent)` pairs, x-variables first, by index.
    pub fn pairs(&self) -> Vec<(Var, u32)> {
        let xs = self
            .x
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Var::X(i as u32 + 1), e));
        let ys = self
            .y
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Var::Y(i as u32 + 1), e));
        xs.chain(ys).collect()
    }
}

// Graded order: weight first, then lexicographic with higher powers of
// lower-indexed variables first (x1^2 before x2).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.x.cmp(&self.x))
            .then_with(|| other.y.cmp(&self.y))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(v, e)| {
                let name = match v {
                    Var::X(i) => format!("x{i}"),
                    Var::Y(i) => format!("y{i}"),
                };
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Truncated index series. Only monomials of weight `<= cap` with nonzero
/// coefficients are stored, so structural equality is series equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSeries {
    sorts: Sorts,
    cap: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl IndexSeries {
    pub fn zero(sorts: Sorts, cap: u32) -> Self {
        IndexSeries {
            sorts,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(sorts: Sorts, cap: u32, c: Rational) -> Self {
        Self::monomial(sorts, cap, Monomial::one(), c)
    }

    pub fn one(sorts: Sorts, cap: u32) -> Self {
        Self::constant(sorts, cap, Rational::one())
    }

    pub fn var(sorts: Sorts, cap: u32, v: Var) -> Self {
        Self::monomial(sorts, cap, Monomial::var(v), Rational::one())
    }

    pub fn monomial(sorts: Sorts, cap: u32, m: Monomial, c: Rational) -> Self {
        let mut s = Self::zero(sorts, cap);
        s.add_term(m, c);
        s
    }

    /// Sum of `(monomial, coefficient)` terms.
    pub fn from_terms(
        sorts: Sorts,
        cap: u32,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut s = Self::zero(sorts, cap);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// `sum_n a_n v^n` for a univariate series `a`.
    pub fn from_uni(sorts: Sorts, cap: u32, v: Var, a: &UniSeries) -> Self {
        let mut s = Self::zero(sorts, cap);
        for (n, c) in a.coeffs().iter().enumerate() {
            if n as u32 * v.index() > cap {
                break;
            }
            s.add_term(Monomial::var_pow(v, n as u32), c.clone());
        }
        s
    }

    /// Adds `c * m`, dropping it if `m` is past the cap.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.weight() > self.cap {
            return;
        }
        if self.sorts == Sorts::One {
            assert!(!m.has_y(), "y-variable in a one-sort series");
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn sorts(&self) -> Sorts {
        self.sorts
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    /// Drop everything above `cap` (a larger cap is a no-op on the data but
    /// still only valid up to the old cap, so it is refused).
    pub fn truncate(&self, cap: u32) -> Self {
        assert!(
            cap <= self.cap,
            "cannot raise the cap of a truncated series"
        );
        Self::from_terms(
            self.sorts,
            cap,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// View a one-sort series as a two-sort one (no `y` terms).
    pub fn into_two_sort(mut self) -> Self {
        self.sorts = Sorts::Two;
        self
    }

    fn check_sorts(&self, other: &Self) -> Result<(), SeriesError> {
        if self.sorts != other.sorts {
            Err(SeriesError::SortMismatch(self.sorts, other.sorts))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_sorts(other)?;
        let mut out = self.truncate(self.cap.min(other.cap));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_sorts(other)?;
        let cap = self.cap.min(other.cap);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let rhs: Vec<(u32, &Monomial, &Rational)> = other
            .terms
            .iter()
            .map(|(m, c)| (m.weight(), m, c))
            .collect();
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            if wa > cap {
                break;
            }
            for &(wb, mb, cb) in &rhs {
                if wa + wb > cap {
                    break;
                }
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(IndexSeries {
            sorts: self.sorts,
            cap,
            terms: acc,
        })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.sorts, self.cap);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.sorts, self.cap);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Adams operation `x_m -> x_{im}`, `y_m -> y_{im}`.
    pub fn adams(&self, i: u32) -> Self {
        assert!(i >= 1);
        let mut out = Self::zero(self.sorts, self.cap);
        for (m, c) in &self.terms {
            let scaled = Monomial::from_pairs(
                &m.pairs()
                    .into_iter()
                    .map(|(v, e)| {
                        let v = match v {
                            Var::X(k) => Var::X(k * i),
                            Var::Y(k) => Var::Y(k * i),
                        };
                        (v, e)
                    })
                    .collect::<Vec<_>>(),
            );
            out.add_term(scaled, c.clone());
        }
        out
    }

    /// Substitute `x_i -> gx(x_i, x_{2i}, ...)` and `y_j -> gy(x_j, x_{2j}, ...)`.
    /// The result has the sorts of `gx` and the smallest of the caps.
    ///
    /// When a substituted series has a nonzero constant term the result is
    /// only meaningful if `self` is a polynomial lying entirely below its cap.
    pub fn substitute(
        &self,
        gx: &IndexSeries,
        gy: Option<&IndexSeries>,
    ) -> Result<IndexSeries, SeriesError> {
        if let Some(gy) = gy {
            gx.check_sorts(gy)?;
        }
        let cap = [Some(self.cap), Some(gx.cap), gy.map(|g| g.cap)]
            .into_iter()
            .flatten()
            .min()
            .unwrap();
        let gx_free = gx.constant_term().is_zero();
        let gy_free = gy.is_none_or(|g| g.constant_term().is_zero());
        let mut powers: HashMap<(Var, u32), IndexSeries> = HashMap::new();
        let mut out = Self::zero(gx.sorts, cap);
        for (m, c) in &self.terms {
            if gx_free && gy_free && m.weight() > cap {
                continue;
            }
            let mut term = Self::constant(gx.sorts, cap, c.clone());
            for (v, e) in m.pairs() {
                let base = match v {
                    Var::X(_) => gx,
                    Var::Y(_) => gy.ok_or(SeriesError::MissingSecondSort)?,
                };
                let factor = powers
                    .entry((v, e))
                    .or_insert_with(|| base.truncate(cap).adams(v.index()).pow(e));
                term = &term * &*factor;
                if term.is_empty() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Plethystic composition `f o g` of one-sort series.
    pub fn plethysm(&self, g: &IndexSeries) -> Result<IndexSeries, SeriesError> {
        if self.sorts != Sorts::One || g.sorts != Sorts::One {
            return Err(SeriesError::NotOneSort);
        }
        self.substitute(g, None)
    }

    fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero(self.sorts, self.cap);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.set_exp(v, e - 1);
            out.add_term(dm, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Formal partial derivative with respect to `x_1`.
    pub fn d_dx1(&self) -> Self {
        self.derivative(Var::X(1))
    }

    /// Formal partial derivative with respect to `y_1`.
    pub fn d_dy1(&self) -> Self {
        self.derivative(Var::Y(1))
    }

    /// Collapse a one-sort series to a univariate series of order `cap`.
    pub fn specialize(&self, mode: Specialization) -> Result<UniSeries, SeriesError> {
        if self.sorts != Sorts::One {
            return Err(SeriesError::NotOneSort);
        }
        let mut out = UniSeries::zero(self.cap as usize);
        for ((dx, _), c) in self.specialize_two(mode) {
            let n = dx as usize;
            out.set_coeff(n, out.coeff(n) + c);
        }
        Ok(out)
    }

    /// Two-sort specialization: coefficients indexed by `(x-degree, y-degree)`.
    pub fn specialize_two(&self, mode: Specialization) -> BTreeMap<(u32, u32), Rational> {
        let mut out: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = match mode {
                Specialization::Labelled => {
                    let only_first = m.pairs().iter().all(|(v, _)| v.index() == 1);
                    if !only_first {
                        continue;
                    }
                    (m.exp(Var::X(1)), m.exp(Var::Y(1)))
                }
                Specialization::Unlabelled | Specialization::AsymmetricBar => {
                    (m.x_weight(), m.y_weight())
                }
            };
            *out.entry(key).or_insert_with(Rational::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Canonical JSON form: terms in graded-lexicographic monomial order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<Value> = m
                    .pairs()
                    .into_iter()
                    .map(|(v, e)| {
                        let name = match v {
                            Var::X(i) => format!("x{i}"),
                            Var::Y(i) => format!("y{i}"),
                        };
                        json!([name, e])
                    })
                    .collect();
                json!({ "monomial": mono, "coeff": c.to_string() })
            })
            .collect();
        json!({ "sorts": self.sorts.count(), "cap": self.cap, "terms": terms })
    }
}

impl fmt::Display for IndexSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &IndexSeries {
    type Output = IndexSeries;
    fn add(self, rhs: &IndexSeries) -> IndexSeries {
        self.checked_add(rhs).expect("index series sort mismatch")
    }
}

impl Sub for &IndexSeries {
    type Output = IndexSeries;
    fn sub(self, rhs: &IndexSeries) -> IndexSeries {
        self.checked_sub(rhs).expect("index series sort mismatch")
    }
}

impl Mul for &IndexSeries {
    type Output = IndexSeries;
    fn mul(self, rhs: &IndexSeries) -> IndexSeries {
        self.checked_mul(rhs).expect("index series sort mismatch")
    }
}

impl Neg for &IndexSeries {
    type Output = IndexSeries;
    fn neg(self) -> IndexSeries {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn x(i: u32) -> IndexSeries {
        IndexSeries::var(Sorts::One, 30, Var::X(i))
    }

    fn one() -> IndexSeries {
        IndexSeries::one(Sorts::One, 30)
    }

    fn z_e2() -> IndexSeries {
        (&(&x(1) * &x(1)) + &x(2)).scale(&q(1, 2))
    }

    fn g_e2() -> IndexSeries {
        (&(&x(1) * &x(1)) - &x(2)).scale(&q(1, 2))
    }

    #[test]
    fn ring_examples() {
        let a = &one() + &x(1);
        let sq = &a * &a;
        let expected = IndexSeries::from_terms(
            Sorts::One,
            30,
            vec![
                (Monomial::one(), q(1, 1)),
                (Monomial::var(Var::X(1)), q(2, 1)),
                (Monomial::var_pow(Var::X(1), 2), q(1, 1)),
            ],
        );
        assert_eq!(sq, expected);
        let sum = &z_e2() + &g_e2();
        assert_eq!(sum, &x(1) * &x(1));
        let x2sq = &x(2) * &x(2);
        let m = Monomial::var_pow(Var::X(2), 2);
        assert_eq!(m.weight(), 4);
        assert_eq!(x2sq, IndexSeries::monomial(Sorts::One, 30, m, q(1, 1)));
    }

    #[test]
    fn sort_mismatch_is_an_error() {
        let a = x(1);
        let b = IndexSeries::var(Sorts::Two, 30, Var::Y(1));
        assert_eq!(
            a.checked_add(&b),
            Err(SeriesError::SortMismatch(Sorts::One, Sorts::Two))
        );
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn multiply_respects_cap() {
        let a = IndexSeries::var(Sorts::One, 5, Var::X(3));
        assert!((&a * &a).is_empty());
        assert_eq!((&a * &x(1)).cap(), 5);
    }

    #[test]
    fn plethysm_examples() {
        assert_eq!(z_e2().plethysm(&x(1)).unwrap(), z_e2());
        let expected = (&(&x(2) * &x(2)) + &x(4)).scale(&q(1, 2));
        assert_eq!(x(2).plethysm(&z_e2()).unwrap(), expected);
        // E2 o E2: one unlabelled pair of pairs on four points.
        let ee = z_e2().plethysm(&z_e2()).unwrap();
        let u = ee.specialize(Specialization::Unlabelled).unwrap();
        assert_eq!(u.coeff(4), q(1, 1));
        assert_eq!(
            ee.specialize(Specialization::Labelled).unwrap().coeff(4),
            q(3, 24)
        );
    }

    #[test]
    fn specializations_of_e2() {
        let l = z_e2().specialize(Specialization::Labelled).unwrap();
        assert_eq!(l.coeff(2), q(1, 2));
        let u = z_e2().specialize(Specialization::Unlabelled).unwrap();
        assert_eq!(u.coeff(2), q(1, 1));
        let b = g_e2().specialize(Specialization::AsymmetricBar).unwrap();
        assert_eq!(b, UniSeries::zero(30));
    }

    #[test]
    fn derivatives() {
        let m = IndexSeries::monomial(
            Sorts::One,
            30,
            Monomial::from_pairs(&[(Var::X(1), 2), (Var::X(2), 1)]),
            q(1, 1),
        );
        let d = IndexSeries::monomial(
            Sorts::One,
            30,
            Monomial::from_pairs(&[(Var::X(1), 1), (Var::X(2), 1)]),
            q(2, 1),
        );
        assert_eq!(m.d_dx1(), d);
        assert!(x(2).d_dx1().is_empty());
    }

    #[test]
    fn text_form_is_sorted() {
        let s = &g_e2() + &x(1);
        assert_eq!(s.to_string(), "x1 + 1/2*x1^2 - 1/2*x2");
        let j = s.to_json();
        assert_eq!(j["terms"][0]["monomial"], json!([["x1", 1]]));
        assert_eq!(j["terms"][2]["coeff"], json!("-1/2"));
    }

    #[test]
    fn constant_term_substitution_of_polynomial() {
        // E2(1 + X) as series: Z_E2 o (1 + x1).
        let g = &one() + &x(1);
        let s = z_e2().plethysm(&g).unwrap();
        let expected = &(&(&one() + &x(1)) + &z_e2()) + &IndexSeries::zero(Sorts::One, 30);
        assert_eq!(s, expected);
    }
}
