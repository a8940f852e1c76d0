//! Closed-form counts, generating functions and index series of plane and
//! planar 2-trees, pointed and unpointed.
//!
//! Three independent routes are offered for every quantity:
//!
//! * `formula`: the closed-form coefficient in Catalan numbers, with the
//!   range of `n` for which it is stated;
//! * `series`: coefficient extraction from the closed-form expression of the
//!   generating function in terms of `A(x)`;
//! * `canonical`: the molecular expansion assembled compositionally.
//!
//! Closed forms are evaluated exactly as stated; [`count`] rejects results
//! that are not nonnegative integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalan::{a_series, catq};
use crate::kind::{Family, Mode, Pointing};
use crate::molecular::{
    expansion_to_index_series, factorial, planar_expansion, planar_pointed_expansions,
    plane_expansion, plane_pointed_expansions, MolecularError, MolecularExpansion,
};
use crate::series::{IndexSeries, SeriesError, Sorts, Specialization, UniSeries, Var};
use crate::species_index::{
    builtin, gamma_compose_nonzero_const, index_of_substitution, BuiltinSpecies, GroupError,
    IndexKind, Outer, PermGroupTwoSort, DEFAULT_SUBGROUP_BOUND,
};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnumerateError {
    #[error("{0} is not a supported count")]
    Unsupported(CountKind),
    #[error("closed form {check} gives {value} at n = {n}, not a nonnegative integer")]
    FormulaAnomaly {
        check: String,
        n: usize,
        value: Rational,
    },
    #[error(transparent)]
    Molecular(#[from] MolecularError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// What is being counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountKind {
    pub family: Family,
    pub pointing: Pointing,
    pub mode: Mode,
}

impl std::fmt::Display for CountKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.family, self.pointing, self.mode)
    }
}

impl CountKind {
    /// Asymmetric counts of pointed planar structures are not covered.
    pub fn new(family: Family, pointing: Pointing, mode: Mode) -> Result<Self, EnumerateError> {
        let kind = CountKind {
            family,
            pointing,
            mode,
        };
        if family == Family::Planar && pointing != Pointing::None && mode == Mode::Asymmetric {
            return Err(EnumerateError::Unsupported(kind));
        }
        Ok(kind)
    }

    /// Every supported kind.
    pub fn all() -> Vec<CountKind> {
        let mut out = Vec::new();
        for &f in Family::ALL {
            for &p in Pointing::ALL {
                for &m in Mode::ALL {
                    if let Ok(k) = CountKind::new(f, p, m) {
                        out.push(k);
                    }
                }
            }
        }
        out
    }

    /// Identifier of the closed form, used by the discrepancy ledger.
    pub fn check_id(&self) -> String {
        format!("count:{}:{}:{}", self.family, self.pointing, self.mode)
    }

    /// Smallest `n` covered by the closed form.
    pub fn formula_start(&self) -> usize {
        match self.family {
            Family::Plane => 2,
            Family::Planar => 1,
        }
    }
}

fn c(num: i64, den: i64) -> Rational {
    catq(num, den)
}

fn r(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

fn fact(n: usize) -> Rational {
    Rational::from_integer(factorial(n as u32))
}

/// The closed-form value at `n`, or `None` below its stated range.
pub fn formula_value(kind: CountKind, n: usize) -> Option<Rational> {
    if n < kind.formula_start() {
        return None;
    }
    closed_form(kind, n)
}

/// The closed form evaluated at any `n`, ignoring its stated range.
pub fn closed_form(kind: CountKind, n: usize) -> Option<Rational> {
    use Family::*;
    use Mode::*;
    use Pointing::*;
    let k = n as i64;
    Some(match (kind.family, kind.pointing, kind.mode) {
        (Plane, None, Labelled) => fact(n) * (c(k, 1) * r(2, 3) - c(k + 1, 1) * r(1, 6)),
        (Plane, None, Unlabelled) => {
            c(k, 1) * r(2, 3) - c(k + 1, 1) * r(1, 6) + c(k, 2) * r(1, 2) + c(k - 1, 3) * r(2, 3)
        }
        // the stated index is `k/3`; read with k = n
        (Plane, None, Asymmetric) => {
            c(k, 1) * r(2, 3) - c(k + 1, 1) * r(1, 6) - c(k, 3) * r(1, 2) - c(k - 1, 3) * r(1, 3)
        }
        (Plane, Edge, Labelled) => fact(n) * c(k + 1, 1) * r(1, 2),
        (Plane, Edge, Unlabelled) => (c(k + 1, 1) + c(k, 2)) * r(1, 2),
        (Plane, Edge, Asymmetric) => (c(k + 1, 1) - c(k, 2)) * r(1, 2),
        (Plane, Triangle, Labelled) => fact(n) * (c(k + 1, 1) - c(k, 1)) * r(1, 3),
        (Plane, Triangle, Unlabelled) => (c(k + 1, 1) - c(k, 1) + c(k - 1, 3) * r(2, 1)) * r(1, 3),
        (Plane, Triangle, Asymmetric) => (c(k + 1, 1) - c(k, 1) - c(k - 1, 3)) * r(1, 3),
        (Plane, TriangleEdge, Labelled) => fact(n) * (c(k + 1, 1) - c(k, 1)),
        (Plane, TriangleEdge, Unlabelled | Asymmetric) => c(k + 1, 1) - c(k, 1),
        (Planar, None, Labelled) => fact(n) * (c(k, 1) * r(1, 3) - c(k + 1, 1) * r(1, 12)),
        (Planar, None, Unlabelled) => {
            c(k, 1) * r(1, 3) - c(k + 1, 1) * r(1, 12)
                + c(k - 1, 2) * r(1, 2)
                + c(k - 1, 3) * r(1, 3)
                + c(k, 2) * r(3, 4)
        }
        (Planar, None, Asymmetric) => {
            -c(k + 1, 1) * r(1, 12) + c(k, 1) * r(1, 3)
                - c(k, 2) * r(3, 4)
                - c(k - 1, 2) * r(1, 2)
                - c(k - 1, 3) * r(1, 6)
                + c(k - 2, 4) * r(1, 2)
                + c(k - 4, 6) * r(1, 2)
        }
        (Planar, Edge, Labelled) => fact(n) * c(k + 1, 1) * r(1, 4),
        (Planar, Edge, Unlabelled) => {
            c(k + 1, 1) * r(1, 4) + c(k - 1, 2) * r(1, 2) + c(k, 2) * r(3, 4)
        }
        (Planar, Triangle, Labelled) => fact(n) * (c(k + 1, 1) - c(k, 1)) * r(1, 6),
        (Planar, Triangle, Unlabelled) => match n {
            1 | 2 => r(1, 1),
            3 => r(2, 1),
            4 => r(6, 1),
            _ => {
                (c(k + 1, 1) - c(k, 1)) * r(1, 6)
                    + (c(k - 1, 2) + c(k, 2)) * r(1, 2)
                    + c(k - 1, 3) * r(1, 3)
            }
        },
        (Planar, TriangleEdge, Labelled) => fact(n) * (c(k + 1, 1) - c(k, 1)) * r(1, 2),
        (Planar, TriangleEdge, Unlabelled) => {
            (c(k + 1, 1) - c(k, 1)) * r(1, 2) + c(k - 1, 2) + c(k, 2)
        }
        (Planar, _, Asymmetric) => return Option::None,
    })
}

/// The count evaluated by its closed form; below the stated range the
/// canonical value is returned instead.
pub fn count(kind: CountKind, n: usize) -> Result<BigInt, EnumerateError> {
    CountKind::new(kind.family, kind.pointing, kind.mode)?;
    match formula_value(kind, n) {
        Some(v) if v.is_integer() && !v.is_negative() => Ok(v.to_integer()),
        Some(value) => Err(EnumerateError::FormulaAnomaly {
            check: kind.check_id(),
            n,
            value,
        }),
        None => canonical_count(kind, n),
    }
}

/// The canonical molecular expansion of a family with a given pointing.
pub fn canonical_expansion(
    family: Family,
    pointing: Pointing,
    max_degree: u32,
) -> Result<MolecularExpansion, EnumerateError> {
    let pointed = match family {
        Family::Plane => plane_pointed_expansions(max_degree)?,
        Family::Planar => planar_pointed_expansions(max_degree)?,
    };
    Ok(match pointing {
        Pointing::None => match family {
            Family::Plane => plane_expansion(max_degree)?,
            Family::Planar => planar_expansion(max_degree)?,
        },
        Pointing::Edge => pointed.edge,
        Pointing::Triangle => pointed.triangle,
        Pointing::TriangleEdge => pointed.flag,
    })
}

fn count_from_expansion(m: &MolecularExpansion, mode: Mode, n: u32) -> BigInt {
    match mode {
        Mode::Labelled => m.labelled_count(n),
        Mode::Unlabelled => m.unlabelled_count(n),
        Mode::Asymmetric => m.asymmetric_count(n),
    }
}

/// The count read off the canonical molecular expansion.
pub fn canonical_count(kind: CountKind, n: usize) -> Result<BigInt, EnumerateError> {
    let m = canonical_expansion(kind.family, kind.pointing, n as u32)?;
    Ok(count_from_expansion(&m, kind.mode, n as u32))
}

/// Canonical counts for `n = 0..=n_max` from a single expansion.
pub fn canonical_counts(kind: CountKind, n_max: usize) -> Result<Vec<BigInt>, EnumerateError> {
    let m = canonical_expansion(kind.family, kind.pointing, n_max as u32)?;
    Ok((0..=n_max as u32)
        .map(|n| count_from_expansion(&m, kind.mode, n))
        .collect())
}

/// Kind of generating function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfForm {
    /// Exponential generating function of labelled structures.
    Egf,
    /// Ordinary generating function of unlabelled structures.
    Ogf,
    /// Ordinary generating function of asymmetric structures.
    Bar,
}

impl From<Mode> for GfForm {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Labelled => GfForm::Egf,
            Mode::Unlabelled => GfForm::Ogf,
            Mode::Asymmetric => GfForm::Bar,
        }
    }
}

/// Building blocks for the closed-form generating functions.
struct Blocks {
    order: usize,
    a: UniSeries,
}

impl Blocks {
    fn new(order: usize) -> Self {
        Blocks {
            order,
            a: a_series(order),
        }
    }

    /// `A(x^m)^e`.
    fn a(&self, m: usize, e: u32) -> UniSeries {
        self.a.substitute_power(m).pow(e)
    }

    /// `A_+(x^m)^e`.
    fn ap(&self, m: usize, e: u32) -> UniSeries {
        (&self.a.substitute_power(m) - &self.one()).pow(e)
    }

    fn one(&self) -> UniSeries {
        UniSeries::one(self.order)
    }

    fn xk(&self, k: usize) -> UniSeries {
        self.one().shift(k)
    }

    fn q(&self, num: i64, den: i64) -> UniSeries {
        self.one().scale(&r(num, den))
    }
}

fn sum(terms: &[UniSeries]) -> UniSeries {
    terms
        .iter()
        .skip(1)
        .fold(terms[0].clone(), |acc, t| &acc + t)
}

fn sc(s: &UniSeries, num: i64, den: i64) -> UniSeries {
    s.scale(&r(num, den))
}

/// The generating function of `kind` from its closed-form expression in
/// `A(x)`. Where no such expression is stated (asymmetric planar) the
/// closed-form asymmetry index series is specialized instead.
pub fn gf(kind: CountKind, order: usize) -> Result<UniSeries, EnumerateError> {
    CountKind::new(kind.family, kind.pointing, kind.mode)?;
    let b = Blocks::new(order);
    let x = b.xk(1);
    use Family::*;
    use GfForm::*;
    use Pointing::*;
    let s = match (kind.family, kind.pointing, GfForm::from(kind.mode)) {
        (Plane, None, Egf) => sum(&[
            b.q(1, 2),
            sc(&x, 2, 3),
            b.a(1, 1),
            sc(&b.a(1, 2), -1, 2),
            sc(&(&x * &b.a(1, 3)), 1, 3),
        ]),
        (Plane, None, Ogf) => sum(&[
            b.one(),
            x.clone(),
            b.a(1, 1),
            sc(&(&x * &b.a(1, 3)), 1, 3),
            sc(&b.a(2, 1), -1, 2),
            sc(&(&x * &b.a(3, 1)), -1, 3),
            sc(&b.a(1, 2), -1, 2),
        ]),
        (Plane, None, Bar) => sum(&[
            b.a(1, 1),
            sc(&(&x * &b.a(1, 3)), 1, 3),
            -&b.a(2, 1),
            -&b.a(3, 1),
            sc(&b.a(1, 2), -1, 2),
        ]),
        (Plane, Edge, Egf) => sc(&(&b.one() + &b.a(1, 2)), 1, 2),
        (Plane, Edge, Ogf) => sc(&(&b.a(1, 2) + &b.a(2, 1)), 1, 2),
        (Plane, Edge, Bar) => &b.one() + &sc(&(&b.a(1, 2) - &b.a(2, 1)), 1, 2),
        (Plane, Triangle, Egf) => sc(&(&x * &(&b.q(2, 1) + &b.a(1, 3))), 1, 3),
        (Plane, Triangle, Ogf) => sc(&(&x * &(&b.a(1, 3) + &sc(&b.a(3, 1), 2, 1))), 1, 3),
        (Plane, Triangle, Bar) => &x + &sc(&(&x * &(&b.a(1, 3) - &b.a(3, 1))), 1, 3),
        (Plane, TriangleEdge, _) => &b.a(1, 2) - &b.a(1, 1),
        (Planar, Edge, Egf) => sum(&[
            b.one(),
            sc(&(&x * &(&b.one() + &b.a(1, 2))), 1, 2),
            sc(&(&b.xk(2) * &b.a(1, 4)), 1, 4),
        ]),
        (Planar, Edge, Ogf) => sum(&[
            b.one(),
            &x * &b.a(1, 1),
            sc(&(&x * &(&b.a(1, 2) + &b.a(2, 1))), 1, 2),
            sc(&(&b.xk(2) * &(&b.a(1, 4) + &sc(&b.a(2, 2), 3, 1))), 1, 4),
        ]),
        (Planar, Triangle, Egf) => sum(&[
            x.clone(),
            sc(&(&b.xk(2) * &(&b.one() + &b.a(1, 2))), 1, 2),
            sc(&(&x * &b.ap(1, 2)), 1, 2),
            sc(&(&b.xk(4) * &b.a(1, 6)), 1, 6),
        ]),
        (Planar, Triangle, Ogf) => sum(&[
            x.clone(),
            sc(&(&b.xk(2) * &(&b.a(1, 2) + &b.a(2, 1))), 1, 2),
            sc(&(&x * &(&b.ap(1, 2) + &b.ap(2, 1))), 1, 2),
            sc(
                &(&b.xk(4) * &sum(&[b.a(1, 6), sc(&b.a(3, 2), 2, 1), sc(&b.a(2, 3), 3, 1)])),
                1,
                6,
            ),
        ]),
        (Planar, TriangleEdge, Egf) => {
            &sc(&(&x * &(&b.one() + &b.a(1, 2))), 1, 2)
                + &sc(&(&b.xk(2) * &(&b.one() + &b.a(1, 4))), 1, 2)
        }
        (Planar, TriangleEdge, Ogf) => {
            &sc(&(&x * &(&b.a(1, 2) + &b.a(2, 1))), 1, 2)
                + &sc(&(&b.xk(2) * &(&b.a(1, 4) + &b.a(2, 2))), 1, 2)
        }
        (Planar, None, Egf) => sum(&[
            b.one(),
            x.clone(),
            sc(&(&x * &b.ap(1, 2)), 1, 2),
            sc(&(&b.xk(2) * &b.a(1, 2)), 1, 2),
            sc(&(&b.xk(2) * &b.a(1, 4)), -1, 4),
            sc(&(&b.xk(4) * &b.a(1, 6)), -1, 6),
        ]),
        (Planar, None, Ogf) => sum(&[
            b.one(),
            x.clone(),
            sc(&(&x * &(&b.ap(1, 2) + &b.ap(2, 1))), 1, 2),
            sc(&(&b.xk(2) * &b.a(2, 1)), 1, 2),
            sc(&(&b.xk(2) * &(&b.a(1, 2) - &b.a(2, 2))), 1, 2),
            sc(&(&b.xk(2) * &b.a(1, 4)), -1, 4),
            sc(
                &(&b.xk(4) * &sum(&[b.a(1, 6), sc(&b.a(3, 2), 2, 1), sc(&b.a(2, 3), 3, 1)])),
                1,
                6,
            ),
        ]),
        (Planar, None, Bar) => index_series(Planar, IndexKind::Gamma, order as u32)?
            .specialize(Specialization::AsymmetricBar)?,
        (Planar, _, Bar) => unreachable!("rejected by CountKind::new"),
    };
    Ok(s)
}

/// The count read off [`gf`].
pub fn series_count(kind: CountKind, n: usize) -> Result<Rational, EnumerateError> {
    let s = gf(kind, n)?;
    let v = s.coeff(n);
    Ok(match kind.mode {
        Mode::Labelled => v * fact(n),
        _ => v,
    })
}

fn x_pow(cap: u32, i: u32, e: u32) -> IndexSeries {
    IndexSeries::var(Sorts::One, cap, Var::X(i)).pow(e)
}

/// Closed-form index series. The cycle index of planar 2-trees has no
/// closed form here and is assembled from the pointed series.
pub fn index_series(
    family: Family,
    kind: IndexKind,
    cap: u32,
) -> Result<IndexSeries, EnumerateError> {
    Ok(match (family, kind) {
        (Family::Plane, _) => plane_index_series(kind, cap),
        (Family::Planar, IndexKind::Gamma) => planar_gamma(PLANAR_GAMMA_START, cap),
        (Family::Planar, IndexKind::Z) => {
            let p = pointed_index_series(family, kind, cap)?;
            &(&p.edge + &p.triangle) - &p.flag
        }
    })
}

fn plane_index_series(kind: IndexKind, cap: u32) -> IndexSeries {
    let mut out = IndexSeries::one(Sorts::One, cap);
    let sign = match kind {
        IndexKind::Z => r(1, 1),
        IndexKind::Gamma => r(-1, 1),
    };
    if kind == IndexKind::Gamma {
        out = &out + &x_pow(cap, 1, 1);
    }
    let x1 = x_pow(cap, 1, 1);
    for n in 1..=cap as i64 {
        let lead = c(n, 1) * r(2, 3) - c(n + 1, 1) * r(1, 6);
        out = &out + &x_pow(cap, 1, n as u32).scale(&lead);
        out = &out + &x_pow(cap, 2, n as u32).scale(&(c(n, 1) * r(1, 2) * &sign));
    }
    let third = match kind {
        IndexKind::Z => r(2, 3),
        IndexKind::Gamma => r(-1, 3),
    };
    for n in 0..=cap as i64 {
        out = &out + &(&x1 * &x_pow(cap, 3, n as u32)).scale(&(c(n, 1) * &third));
    }
    out
}

/// First index of each of the seven sums in the planar asymmetry index
/// series, in the order `x_1^n`, `x_2^n`, `x_1 x_2^n`, `x_1^2 x_2^n`,
/// `x_1 x_3^n`, `x_2 x_4^n`, `x_1 x_3 x_6^n`. The ranges are not stated with
/// the coefficients; these are the ones consistent with the expansion.
pub const PLANAR_GAMMA_START: [u32; 7] = [2, 1, 1, 1, 1, 1, 0];

fn planar_gamma(start: [u32; 7], cap: u32) -> IndexSeries {
    let mut out = &IndexSeries::one(Sorts::One, cap) + &x_pow(cap, 1, 1);
    let monomial = |family: usize, n: u32| -> IndexSeries {
        match family {
            0 => x_pow(cap, 1, n),
            1 => x_pow(cap, 2, n),
            2 => &x_pow(cap, 1, 1) * &x_pow(cap, 2, n),
            3 => &x_pow(cap, 1, 2) * &x_pow(cap, 2, n),
            4 => &x_pow(cap, 1, 1) * &x_pow(cap, 3, n),
            5 => &x_pow(cap, 2, 1) * &x_pow(cap, 4, n),
            _ => &(&x_pow(cap, 1, 1) * &x_pow(cap, 3, 1)) * &x_pow(cap, 6, n),
        }
    };
    for (family, &first) in start.iter().enumerate() {
        for n in first..=cap {
            let k = n as i64;
            let coeff = match family {
                0 => -c(k + 1, 1) * r(1, 12) + c(k, 1) * r(1, 3),
                1 | 2 => -c(k, 1) * r(1, 2),
                3 => -c(k + 1, 1) * r(1, 4),
                4 => -c(k, 1) * r(1, 6),
                _ => c(k, 1) * r(1, 2),
            };
            out = &out + &monomial(family, n).scale(&coeff);
        }
    }
    out
}

/// The planar asymmetry index series with explicit summation ranges, for
/// probing which ranges are consistent.
pub fn planar_gamma_with_ranges(start: [u32; 7], cap: u32) -> IndexSeries {
    planar_gamma(start, cap)
}

/// Index series of the three pointed species.
#[derive(Clone, Debug, PartialEq)]
pub struct PointedSeries {
    pub edge: IndexSeries,
    pub triangle: IndexSeries,
    pub flag: IndexSeries,
}

/// Index series of the pointed species, computed by substitution into the
/// index series of `E2`, `C3`, `P4bic`, `P6bic`.
pub fn pointed_index_series(
    family: Family,
    kind: IndexKind,
    cap: u32,
) -> Result<PointedSeries, EnumerateError> {
    let one = IndexSeries::one(Sorts::One, cap);
    let x1 = x_pow(cap, 1, 1);
    let a = IndexSeries::from_uni(Sorts::One, cap, Var::X(1), &a_series(cap as usize));
    let a_plus = &a - &one;
    let e2 = |g: &IndexSeries| -> Result<IndexSeries, EnumerateError> {
        Ok(match kind {
            IndexKind::Z => builtin(BuiltinSpecies::E2, kind, cap).plethysm(g)?,
            IndexKind::Gamma => {
                let g0 = g.constant_term();
                if g0.is_zero() {
                    builtin(BuiltinSpecies::E2, kind, cap).plethysm(g)?
                } else {
                    gamma_compose_nonzero_const(Outer::E2, g, &g0)
                }
            }
        })
    };
    let c3 = |g: &IndexSeries| -> Result<IndexSeries, EnumerateError> {
        Ok(match kind {
            IndexKind::Z => builtin(BuiltinSpecies::C3, kind, cap).plethysm(g)?,
            IndexKind::Gamma => gamma_compose_nonzero_const(Outer::C3, g, &g.constant_term()),
        })
    };
    let bic = |group: PermGroupTwoSort| -> Result<IndexSeries, EnumerateError> {
        Ok(index_of_substitution(
            &group,
            kind,
            1,
            &a_plus,
            DEFAULT_SUBGROUP_BOUND,
        )?)
    };
    Ok(match family {
        Family::Plane => PointedSeries {
            edge: e2(&a)?,
            triangle: &x1 * &c3(&a)?,
            flag: &a_plus * &a,
        },
        Family::Planar => PointedSeries {
            edge: &(&one + &(&x1 * &e2(&a)?)) + &bic(PermGroupTwoSort::p4bic())?,
            triangle: &(&(&x1 + &(&x1.pow(2) * &e2(&a)?)) + &(&x1 * &e2(&a_plus)?))
                + &(&x1 * &bic(PermGroupTwoSort::p6bic())?),
            flag: &(&x1 * &e2(&a)?) + &(&x1.pow(2) * &e2(&(&a * &a))?),
        },
    })
}

/// Index series of the canonical molecular expansion.
pub fn canonical_index_series(
    family: Family,
    pointing: Pointing,
    kind: IndexKind,
    cap: u32,
) -> Result<IndexSeries, EnumerateError> {
    let m = canonical_expansion(family, pointing, cap)?;
    Ok(expansion_to_index_series(&m, kind, cap))
}

/// Generating series of the structures whose automorphism group has
/// order exactly `k`, as stated for the unlabelled recombination.
pub fn symmetric_part_series(family: Family, k: usize, order: usize) -> Option<UniSeries> {
    let b = Blocks::new(order);
    let x = b.xk(1);
    Some(match (family, k) {
        (Family::Plane, 2) => b.a(2, 1),
        (Family::Plane, 3) => &x * &b.a(3, 1),
        (Family::Planar, 2) => sum(&[
            sc(&(&b.a(2, 1) - &(&b.xk(2) * &b.a(4, 1))), 3, 2),
            &x * &b.a(2, 1),
            -&(&b.xk(4) * &b.a(6, 1)),
        ]),
        (Family::Planar, 3) => sc(&(&(&x * &b.a(3, 1)) - &(&b.xk(4) * &b.a(6, 1))), 1, 2),
        (Family::Planar, 4) => &b.xk(2) * &b.a(4, 1),
        (Family::Planar, 6) => &b.xk(4) * &b.a(6, 1),
        _ => return None,
    })
}

/// The stated unlabelled recombination: the labelled generating function
/// read as a power series, plus the weighted symmetric parts.
pub fn palmer_read(family: Family, order: usize) -> Result<UniSeries, EnumerateError> {
    let labelled = gf(
        CountKind::new(family, Pointing::None, Mode::Labelled)?,
        order,
    )?;
    let b = Blocks::new(order);
    let x = b.xk(1);
    Ok(match family {
        Family::Plane => sum(&[labelled, sc(&b.a(2, 1), 1, 2), sc(&(&x * &b.a(3, 1)), 2, 3)]),
        Family::Planar => sum(&[
            labelled,
            sc(&(&x * &b.a(2, 1)), 1, 2),
            sc(&(&x * &b.a(3, 1)), 1, 3),
            sc(&b.a(2, 1), 3, 4),
        ]),
    })
}

/// The same recombination with every ingredient taken from the canonical
/// expansion: `sum_n (labelled_n / n! + sum_k (k-1)/k * count_k(n)) x^n`.
pub fn palmer_read_canonical(family: Family, order: usize) -> Result<UniSeries, EnumerateError> {
    let m = canonical_expansion(family, Pointing::None, order as u32)?;
    let coeffs = (0..=order as u32).map(|n| {
        let mut v = Rational::new(m.labelled_count(n), factorial(n));
        for (k, cnt) in m.by_stabilizer_order(n) {
            v += Rational::new(cnt * BigInt::from(k - 1), BigInt::from(k));
        }
        v
    });
    Ok(UniSeries::from_coeffs(order, coeffs))
}

/// Counts by automorphism group order from the canonical expansion.
pub fn canonical_by_stab_order(
    family: Family,
    n: usize,
) -> Result<BTreeMap<usize, BigInt>, EnumerateError> {
    Ok(canonical_expansion(family, Pointing::None, n as u32)?.by_stabilizer_order(n as u32))
}

/// Which route produced a table value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    ClosedForm,
    Series,
    PalmerRead,
    Canonical,
    Oracle,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed-form",
            Route::Series => "series",
            Route::PalmerRead => "palmer-read",
            Route::Canonical => "canonical",
            Route::Oracle => "oracle",
        }
    }
}

/// One row of an exported table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub kind: CountKind,
    pub value: Rational,
    pub route: Route,
}

impl TableRow {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "family": self.kind.family.as_str(),
            "pointing": self.kind.pointing.as_str(),
            "mode": self.kind.mode.as_str(),
            "value": self.value.to_string(),
            "route": self.route.as_str(),
        })
    }

    pub fn csv_record(&self) -> [String; 6] {
        [
            self.n.to_string(),
            self.kind.family.to_string(),
            self.kind.pointing.to_string(),
            self.kind.mode.to_string(),
            self.value.to_string(),
            self.route.as_str().to_string(),
        ]
    }
}

pub const TABLE_COLUMNS: [&str; 6] = ["n", "family", "pointing", "mode", "value", "route"];

/// Values of `kind` for `n` in `range` by one route. Closed-form values are
/// reported as computed, even when they are not counts; below the stated
/// range the canonical value is used and the row says so. The oracle route
/// is not available here; see [`crate::oracle`].
pub fn table(
    kind: CountKind,
    range: std::ops::RangeInclusive<usize>,
    route: Route,
) -> Result<Vec<TableRow>, EnumerateError> {
    let hi = *range.end();
    let canonical = if matches!(route, Route::Canonical | Route::ClosedForm) {
        canonical_counts(kind, hi)?
    } else {
        vec![]
    };
    let series = match route {
        Route::Series => Some(gf(kind, hi)?),
        Route::PalmerRead if kind.pointing == Pointing::None && kind.mode == Mode::Unlabelled => {
            Some(palmer_read(kind.family, hi)?)
        }
        Route::PalmerRead => return Err(EnumerateError::Unsupported(kind)),
        _ => None,
    };
    range
        .map(|n| {
            let mut row_route = route;
            let value = match route {
                Route::ClosedForm => match formula_value(kind, n) {
                    Some(v) => v,
                    None => {
                        row_route = Route::Canonical;
                        Rational::from_integer(canonical[n].clone())
                    }
                },
                Route::Series => {
                    let v = series.as_ref().expect("series").coeff(n);
                    if kind.mode == Mode::Labelled {
                        v * fact(n)
                    } else {
                        v
                    }
                }
                Route::PalmerRead => series.as_ref().expect("series").coeff(n),
                Route::Canonical => Rational::from_integer(canonical[n].clone()),
                Route::Oracle => return Err(EnumerateError::Unsupported(kind)),
            };
            Ok(TableRow {
                n,
                kind,
                value,
                route: row_route,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(f: Family, p: Pointing, m: Mode) -> CountKind {
        CountKind::new(f, p, m).unwrap()
    }

    #[test]
    fn stated_examples() {
        assert_eq!(
            count(
                kind(Family::Planar, Pointing::Triangle, Mode::Unlabelled),
                4
            )
            .unwrap(),
            6.into()
        );
        assert_eq!(
            count(kind(Family::Plane, Pointing::None, Mode::Unlabelled), 4).unwrap(),
            4.into()
        );
        assert_eq!(
            count(kind(Family::Planar, Pointing::None, Mode::Labelled), 3).unwrap(),
            3.into()
        );
        assert_eq!(
            count(kind(Family::Plane, Pointing::Triangle, Mode::Unlabelled), 4).unwrap(),
            10.into()
        );
        assert_eq!(
            series_count(kind(Family::Plane, Pointing::Edge, Mode::Unlabelled), 2).unwrap(),
            r(3, 1)
        );
        assert_eq!(
            series_count(kind(Family::Plane, Pointing::None, Mode::Labelled), 3).unwrap(),
            r(6, 1)
        );
    }

    #[test]
    fn planar_pointed_asymmetric_is_unsupported() {
        assert!(CountKind::new(Family::Planar, Pointing::Edge, Mode::Asymmetric).is_err());
        assert_eq!(CountKind::all().len(), 21);
    }

    #[test]
    fn anomalies_are_reported() {
        let k = kind(Family::Plane, Pointing::None, Mode::Asymmetric);
        assert!(matches!(
            count(k, 2),
            Err(EnumerateError::FormulaAnomaly { .. })
        ));
        assert_eq!(canonical_count(k, 2).unwrap(), 0.into());
    }

    #[test]
    fn plane_index_series_examples() {
        let z = plane_index_series(IndexKind::Z, 8);
        let x2 = crate::series::Monomial::var_pow(Var::X(2), 3);
        assert_eq!(z.coeff(&x2), r(5, 2));
        assert_eq!(plane_index_series(IndexKind::Gamma, 0).to_string(), "1");
    }

    #[test]
    fn symmetric_parts() {
        let s = symmetric_part_series(Family::Planar, 4, 6).unwrap();
        assert_eq!(s.coeff(2), r(1, 1));
        assert_eq!(palmer_read(Family::Plane, 6).unwrap().coeff(4), r(4, 1));
        assert_eq!(
            palmer_read_canonical(Family::Planar, 6).unwrap().coeff(5),
            r(4, 1)
        );
        // the stated planar recombination inherits a wrong labelled series
        assert_eq!(palmer_read(Family::Planar, 6).unwrap().coeff(5), r(2, 1));
    }
}
