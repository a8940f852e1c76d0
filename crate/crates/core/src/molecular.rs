//! Molecular expansions of the species built from `A`.
//!
//! Two kinds of expansions live here. [`MolecularExpansion`] holds verified
//! nonnegative integer multiplicities and is produced by the compositional
//! routes: substitution of an asymmetric species into a small molecular
//! species (computed from the subgroup lattice of its stabilizer), products,
//! and the dissymmetry combination. [`PrintedExpansion`] holds rational
//! coefficients produced by closed-form coefficient formulas; these are only
//! ever compared against the compositional result.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalan::{a_series, catq};
use crate::series::{IndexSeries, SeriesError, Sorts, UniSeries, Var};
use crate::species_index::{
    builtin, BuiltinSpecies, GroupError, IndexKind, Perm, PermGroupTwoSort, SubgroupLattice,
    DEFAULT_SUBGROUP_BOUND,
};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MolecularError {
    #[error("coefficient of {tag} is not a nonnegative integer: {value}")]
    InvalidCoefficient { tag: String, value: Rational },
    #[error("X*{0} is not in the tag catalogue")]
    NotInCatalogue(String),
    #[error("not an asymmetric species: coefficient of x^{index} is {value}")]
    NotAsymmetric { index: usize, value: Rational },
    #[error("no molecular tag matches a group of order {order} on {degree} points")]
    Unclassified { order: usize, degree: usize },
    #[error("stabilizer does not act freely on the substituted sort")]
    NotFree,
    #[error("routes disagree at {tag}: closed form {closed}, compositional {compositional}")]
    RouteMismatch {
        tag: String,
        closed: String,
        compositional: String,
    },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A molecular species of the catalogue. `k` is the power in the argument
/// `X^k`; the prefixes `X`, `X^2` are products with singletons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MolecularTag {
    One,
    Xpow(u32),
    E2k(u32),
    XE2k(u32),
    X2E2k(u32),
    C3k(u32),
    XC3k(u32),
    /// `P4bic(X, X^k)`; `k = 0` is `E2(X)`.
    P4bick(u32),
    /// `P6bic(X, X^k)`; `k = 0` is `E3(X)`.
    P6bick(u32),
    /// `X * P6bic(X, X^k)`; `k = 0` is `X * E3(X)`.
    XP6bick(u32),
}

impl MolecularTag {
    /// Representative used for comparisons: degenerate arguments are folded
    /// into the tag they are isomorphic to.
    pub fn canonical(self) -> MolecularTag {
        use MolecularTag::*;
        match self {
            Xpow(0) => One,
            E2k(0) | C3k(0) => One,
            XE2k(0) | XC3k(0) => Xpow(1),
            X2E2k(0) => Xpow(2),
            P4bick(0) => E2k(1),
            t => t,
        }
    }

    pub fn degree(self) -> u32 {
        use MolecularTag::*;
        match self {
            One => 0,
            Xpow(k) => k,
            E2k(k) => 2 * k,
            XE2k(k) => 2 * k + 1,
            X2E2k(k) => 2 * k + 2,
            C3k(k) => 3 * k,
            XC3k(k) => 3 * k + 1,
            P4bick(k) => 4 * k + 2,
            P6bick(k) => 6 * k + 3,
            XP6bick(k) => 6 * k + 4,
        }
    }

    /// Order of the automorphism group of one structure, i.e. of the
    /// stabilizer acting on the underlying points.
    pub fn stabilizer_order(self) -> usize {
        use MolecularTag::*;
        match self.canonical() {
            One | Xpow(_) => 1,
            E2k(_) | XE2k(_) | X2E2k(_) => 2,
            C3k(_) | XC3k(_) => 3,
            P4bick(_) => 4,
            P6bick(_) | XP6bick(_) => 6,
        }
    }

    /// The tag of `X` times this species.
    pub fn times_x(self) -> Result<MolecularTag, MolecularError> {
        use MolecularTag::*;
        Ok(match self.canonical() {
            One => Xpow(1),
            Xpow(k) => Xpow(k + 1),
            E2k(k) => XE2k(k),
            XE2k(k) => X2E2k(k),
            C3k(k) => XC3k(k),
            P6bick(k) => XP6bick(k),
            t => return Err(MolecularTag::not_in_catalogue(t)),
        })
    }

    fn not_in_catalogue(t: MolecularTag) -> MolecularError {
        MolecularError::NotInCatalogue(t.to_string())
    }

    fn family_rank(self) -> u8 {
        use MolecularTag::*;
        match self {
            One => 0,
            Xpow(_) => 1,
            E2k(_) => 2,
            XE2k(_) => 3,
            X2E2k(_) => 4,
            C3k(_) => 5,
            XC3k(_) => 6,
            P4bick(_) => 7,
            P6bick(_) => 8,
            XP6bick(_) => 9,
        }
    }

    fn power(self) -> u32 {
        use MolecularTag::*;
        match self {
            One => 0,
            Xpow(k) | E2k(k) | XE2k(k) | X2E2k(k) | C3k(k) | XC3k(k) | P4bick(k) | P6bick(k)
            | XP6bick(k) => k,
        }
    }

    /// A permutation group on `degree()` points realizing this species.
    pub fn representative_group(self) -> PermGroupTwoSort {
        use MolecularTag::*;
        let t = self.canonical();
        let (prefix, core, k) = match t {
            One => return PermGroupTwoSort::trivial(0, 0),
            Xpow(k) => return PermGroupTwoSort::trivial(k as usize, 0),
            E2k(k) => (0, PermGroupTwoSort::symmetric(2).swap_sorts(), k),
            XE2k(k) => (1, PermGroupTwoSort::symmetric(2).swap_sorts(), k),
            X2E2k(k) => (2, PermGroupTwoSort::symmetric(2).swap_sorts(), k),
            C3k(k) => (0, PermGroupTwoSort::cyclic(3).swap_sorts(), k),
            XC3k(k) => (1, PermGroupTwoSort::cyclic(3).swap_sorts(), k),
            P4bick(k) => (0, PermGroupTwoSort::p4bic(), k),
            P6bick(k) => (0, PermGroupTwoSort::p6bic(), k),
            XP6bick(k) => (1, PermGroupTwoSort::p6bic(), k),
        };
        inflate(&core, prefix, k as usize)
    }
}

/// One-sort group on `prefix + n + m * k` points: `prefix` fixed points,
/// then the X-points of `g`, then each Y-slot blown up into `k` points moved
/// rigidly with the slot.
fn inflate(g: &PermGroupTwoSort, prefix: usize, k: usize) -> PermGroupTwoSort {
    let (n, m) = (g.n(), g.m());
    let degree = prefix + n + m * k;
    let elements = g
        .elements()
        .iter()
        .map(|e| {
            let mut p: Perm = (0..degree).collect();
            for i in 0..n {
                p[prefix + i] = prefix + e.x[i];
            }
            for j in 0..m {
                for t in 0..k {
                    p[prefix + n + j * k + t] = prefix + n + e.y[j] * k + t;
                }
            }
            crate::species_index::TwoSortPerm::new(p, vec![])
        })
        .collect::<BTreeSet<_>>();
    PermGroupTwoSort::new(degree, 0, elements.into_iter().collect()).expect("inflated group")
}

impl Ord for MolecularTag {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.stabilizer_order().cmp(&self.stabilizer_order()))
            .then_with(|| self.family_rank().cmp(&other.family_rank()))
            .then_with(|| self.power().cmp(&other.power()))
    }
}

impl PartialOrd for MolecularTag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn power_of_x(k: u32) -> String {
    match k {
        0 => "1".into(),
        1 => "X".into(),
        k => format!("X^{k}"),
    }
}

impl fmt::Display for MolecularTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MolecularTag::*;
        match *self {
            One => write!(f, "1"),
            Xpow(k) => write!(f, "{}", power_of_x(k)),
            E2k(k) => write!(f, "E2({})", power_of_x(k)),
            XE2k(k) => write!(f, "X*E2({})", power_of_x(k)),
            X2E2k(k) => write!(f, "X^2*E2({})", power_of_x(k)),
            C3k(k) => write!(f, "C3({})", power_of_x(k)),
            XC3k(k) => write!(f, "X*C3({})", power_of_x(k)),
            P4bick(0) => write!(f, "E2(X)"),
            P4bick(k) => write!(f, "P4bic(X,{})", power_of_x(k)),
            P6bick(0) => write!(f, "E3(X)"),
            P6bick(k) => write!(f, "P6bic(X,{})", power_of_x(k)),
            XP6bick(0) => write!(f, "X*E3(X)"),
            XP6bick(k) => write!(f, "X*P6bic(X,{})", power_of_x(k)),
        }
    }
}

/// Identifies a permutation group acting on `degree` points with a tag of
/// the catalogue, or `None`. `perms` must be the full list of elements.
///
/// Cyclic groups of order 2 and 3 are determined by cycle type. The Klein
/// and `S3` cases are separated by fixed-point counts, which determine the
/// orbit decomposition for the two signatures that occur.
pub fn classify_action(degree: usize, perms: &[Perm]) -> Option<MolecularTag> {
    use MolecularTag::*;
    let elements: BTreeSet<&Perm> = perms.iter().collect();
    let fixed = |p: &Perm| p.iter().enumerate().filter(|(i, &j)| *i == j).count();
    let order_of = |p: &Perm| -> usize {
        let mut q = p.clone();
        let mut k = 1;
        while q.iter().enumerate().any(|(i, &j)| i != j) {
            q = q.iter().map(|&i| p[i]).collect();
            k += 1;
        }
        k
    };
    let non_id: Vec<&Perm> = elements
        .iter()
        .copied()
        .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
        .collect();
    let d = degree as u32;
    match elements.len() {
        1 => Some(if d == 0 { One } else { Xpow(d) }),
        2 => {
            let f = fixed(non_id[0]) as u32;
            let j = (d - f) / 2;
            match f {
                0 => Some(E2k(j)),
                1 => Some(XE2k(j)),
                2 => Some(X2E2k(j)),
                _ => None,
            }
        }
        3 => {
            let f = fixed(non_id[0]) as u32;
            let j = (d - f) / 3;
            match f {
                0 => Some(C3k(j)),
                1 => Some(XC3k(j)),
                _ => None,
            }
        }
        4 => {
            if non_id.iter().any(|p| order_of(p) != 2) {
                return None;
            }
            let mut fs: Vec<usize> = non_id.iter().map(|p| fixed(p)).collect();
            fs.sort_unstable();
            (fs == [0, 0, 2] && d >= 6).then(|| P4bick((d - 2) / 4))
        }
        6 => {
            let invol: Vec<usize> = non_id
                .iter()
                .filter(|p| order_of(p) == 2)
                .map(|p| fixed(p))
                .collect();
            let three: Vec<usize> = non_id
                .iter()
                .filter(|p| order_of(p) == 3)
                .map(|p| fixed(p))
                .collect();
            if invol.len() != 3 || three.len() != 2 {
                return None;
            }
            if invol.iter().all(|&f| f == 1) && three.iter().all(|&f| f == 0) {
                Some(P6bick((d - 3) / 6))
            } else if invol.iter().all(|&f| f == 2) && three.iter().all(|&f| f == 1) {
                Some(XP6bick((d - 4) / 6))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Nonnegative integer combination of molecular species, truncated at
/// `max_degree`. Tags are stored in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolecularExpansion {
    max_degree: u32,
    terms: BTreeMap<MolecularTag, BigInt>,
}

impl MolecularExpansion {
    pub fn new(max_degree: u32) -> Self {
        MolecularExpansion {
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    /// `sum b_k X^k` for an asymmetric species given by its coefficients.
    pub fn from_asymmetric(b: &UniSeries) -> Result<Self, MolecularError> {
        let coeffs = asymmetric_coeffs(b)?;
        let mut out = Self::new(b.order() as u32);
        for (k, c) in coeffs.into_iter().enumerate() {
            out.add_raw(MolecularTag::Xpow(k as u32), c);
        }
        Ok(out)
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    fn add_raw(&mut self, tag: MolecularTag, c: BigInt) {
        let tag = tag.canonical();
        if tag.degree() > self.max_degree || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(tag).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&tag);
        }
    }

    /// Adds `c` copies of `tag`; rejects negative results.
    pub fn add_term(&mut self, tag: MolecularTag, c: BigInt) -> Result<(), MolecularError> {
        self.add_raw(tag, c);
        self.check_nonnegative()
    }

    fn check_nonnegative(&self) -> Result<(), MolecularError> {
        match self.terms.iter().find(|(_, c)| c.is_negative()) {
            Some((t, c)) => Err(MolecularError::InvalidCoefficient {
                tag: t.to_string(),
                value: Rational::from_integer(c.clone()),
            }),
            None => Ok(()),
        }
    }

    pub fn coeff(&self, tag: MolecularTag) -> BigInt {
        self.terms
            .get(&tag.canonical())
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MolecularTag, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        let mut out = Self::new(max_degree.min(self.max_degree));
        for (t, c) in &self.terms {
            out.add_raw(*t, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::new(self.max_degree.min(other.max_degree));
        for (t, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_raw(*t, c.clone());
        }
        out
    }

    /// Difference of two expansions; fails if a multiplicity turns negative.
    pub fn checked_sub(&self, other: &Self) -> Result<Self, MolecularError> {
        let mut out = self.truncate(self.max_degree.min(other.max_degree));
        for (t, c) in &other.terms {
            out.add_raw(*t, -c.clone());
        }
        out.check_nonnegative()?;
        Ok(out)
    }

    /// `X` times the expansion (the truncation degree grows by one).
    pub fn times_x(&self) -> Result<Self, MolecularError> {
        let mut out = Self::new(self.max_degree + 1);
        for (t, c) in &self.terms {
            out.add_raw(t.times_x()?, c.clone());
        }
        Ok(out)
    }

    /// Terms of exactly degree `n`.
    pub fn degree_terms(&self, n: u32) -> BTreeMap<MolecularTag, BigInt> {
        self.terms
            .iter()
            .filter(|(t, _)| t.degree() == n)
            .map(|(t, c)| (*t, c.clone()))
            .collect()
    }

    pub fn unlabelled_count(&self, n: u32) -> BigInt {
        self.degree_terms(n).values().sum()
    }

    pub fn asymmetric_count(&self, n: u32) -> BigInt {
        let tag = if n == 0 {
            MolecularTag::One
        } else {
            MolecularTag::Xpow(n)
        };
        self.coeff(tag)
    }

    /// `sum coeff * n! / |stabilizer|` over tags of degree `n`.
    pub fn labelled_count(&self, n: u32) -> BigInt {
        let fact: BigInt = (1..=n).map(BigInt::from).product();
        self.degree_terms(n)
            .iter()
            .map(|(t, c)| c * &fact / BigInt::from(t.stabilizer_order()))
            .sum()
    }

    /// Number of unlabelled structures of degree `n` by stabilizer order.
    pub fn by_stabilizer_order(&self, n: u32) -> BTreeMap<usize, BigInt> {
        let mut out = BTreeMap::new();
        for (t, c) in self.degree_terms(n) {
            *out.entry(t.stabilizer_order()).or_insert_with(BigInt::zero) += c;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(t, c)| {
                json!({
                    "tag": t.to_string(),
                    "degree": t.degree(),
                    "coeff": c.to_string(),
                })
            })
            .collect();
        json!({ "max_degree": self.max_degree, "terms": terms })
    }

    pub fn to_printed(&self) -> PrintedExpansion {
        let mut out = PrintedExpansion::new(self.max_degree);
        for (t, c) in &self.terms {
            out.add_term(*t, Rational::from_integer(c.clone()));
        }
        out
    }
}

impl fmt::Display for MolecularExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                if c.is_one() {
                    t.to_string()
                } else if *t == MolecularTag::One {
                    c.to_string()
                } else {
                    format!("{c}*{t}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Molecular expansion with arbitrary rational coefficients, as produced by
/// evaluating a closed-form coefficient formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedExpansion {
    max_degree: u32,
    terms: BTreeMap<MolecularTag, Rational>,
}

impl PrintedExpansion {
    pub fn new(max_degree: u32) -> Self {
        PrintedExpansion {
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn add_term(&mut self, tag: MolecularTag, c: Rational) {
        let tag = tag.canonical();
        if tag.degree() > self.max_degree || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(tag).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&tag);
        }
    }

    pub fn coeff(&self, tag: MolecularTag) -> Rational {
        self.terms
            .get(&tag.canonical())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MolecularTag, &Rational)> {
        self.terms.iter()
    }

    /// Converts to a verified expansion, failing on the first coefficient
    /// that is not a nonnegative integer.
    pub fn to_expansion(&self) -> Result<MolecularExpansion, MolecularError> {
        let mut out = MolecularExpansion::new(self.max_degree);
        for (t, c) in &self.terms {
            if !c.is_integer() || c.is_negative() {
                return Err(MolecularError::InvalidCoefficient {
                    tag: t.to_string(),
                    value: c.clone(),
                });
            }
            out.add_raw(*t, c.to_integer());
        }
        Ok(out)
    }
}

/// A difference between a closed-form coefficient and the compositional one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub check: String,
    pub item: String,
    pub printed: Rational,
    pub canonical: Rational,
}

/// All tags where `printed` and `canonical` differ, up to the smaller degree.
pub fn compare_expansions(
    check: &str,
    printed: &PrintedExpansion,
    canonical: &MolecularExpansion,
) -> Vec<Discrepancy> {
    let d = printed.max_degree.min(canonical.max_degree);
    let tags: BTreeSet<MolecularTag> = printed
        .terms
        .keys()
        .chain(canonical.terms.keys())
        .copied()
        .filter(|t| t.degree() <= d)
        .collect();
    tags.into_iter()
        .filter_map(|t| {
            let p = printed.coeff(t);
            let c = Rational::from_integer(canonical.coeff(t));
            (p != c).then(|| Discrepancy {
                check: check.to_string(),
                item: t.to_string(),
                printed: p,
                canonical: c,
            })
        })
        .collect()
}

fn asymmetric_coeffs(b: &UniSeries) -> Result<Vec<BigInt>, MolecularError> {
    b.coeffs()
        .iter()
        .enumerate()
        .map(|(index, c)| {
            if c.is_integer() && !c.is_negative() {
                Ok(c.to_integer())
            } else {
                Err(MolecularError::NotAsymmetric {
                    index,
                    value: c.clone(),
                })
            }
        })
        .collect()
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_substitute_power(a: &[BigInt], m: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len()];
    for (i, x) in a.iter().enumerate() {
        if i * m < a.len() {
            out[i * m] = x.clone();
        } else {
            break;
        }
    }
    out
}

/// Molecular expansion of `M(X, B)` for `M = X^n Y^m / H` and an asymmetric
/// species `B`, where `H` acts freely on the Y-slots.
///
/// A structure is an `H`-orbit of fillings of the slots by copies of the
/// molecules of `B`. Fillings fixed by a subgroup `W` are constant on its
/// slot orbits, which gives their generating function; Möbius inversion over
/// the subgroup lattice isolates fillings whose stabilizer is exactly `V`.
/// The stabilizer's action on the underlying points is then classified.
pub fn substitute_asymmetric(
    group: &PermGroupTwoSort,
    b: &UniSeries,
) -> Result<MolecularExpansion, MolecularError> {
    let coeffs = asymmetric_coeffs(b)?;
    let max = coeffs.len() - 1;
    for e in group.elements() {
        let moves = e.y.iter().enumerate().any(|(i, &j)| i != j);
        let all_move = e.y.iter().enumerate().all(|(i, &j)| i != j);
        if moves != all_move || (group.m() == 0 && e.x.iter().enumerate().any(|(i, &j)| i != j)) {
            return Err(MolecularError::NotFree);
        }
    }
    let lattice = SubgroupLattice::new(group, DEFAULT_SUBGROUP_BOUND)?;
    let subgroups: Vec<PermGroupTwoSort> =
        (0..lattice.len()).map(|i| lattice.subgroup(i)).collect();
    let fixed: Vec<Vec<BigInt>> = subgroups
        .iter()
        .map(|w| {
            let mut f = vec![BigInt::zero(); max + 1];
            if group.n() <= max {
                f[group.n()] = BigInt::one();
            }
            for orbit in w.y_orbits() {
                f = int_mul(&f, &int_substitute_power(&coeffs, orbit.len()));
            }
            f
        })
        .collect();

    let mut out = MolecularExpansion::new(max as u32);
    for class in lattice.conjugacy_classes() {
        let v = class[0];
        let mut exact = vec![BigInt::zero(); max + 1];
        for (w, fw) in fixed.iter().enumerate() {
            let mu = lattice.mobius(v, w);
            if mu == 0 {
                continue;
            }
            for (d, c) in fw.iter().enumerate() {
                exact[d] += c * mu;
            }
        }
        let sub = &subgroups[v];
        let order = sub.order();
        let scale_num = BigInt::from(order);
        let scale_den = BigInt::from(lattice.normalizer_order(v));
        for (d, e) in exact.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let (count, rem) = (e * &scale_num).div_rem(&scale_den);
            if !rem.is_zero() || count.is_negative() {
                return Err(MolecularError::InvalidCoefficient {
                    tag: format!("orbit type of order {order} at degree {d}"),
                    value: Rational::new(e * &scale_num, scale_den.clone()),
                });
            }
            let tag = image_tag(sub, d)?;
            out.add_raw(tag, count);
        }
    }
    out.check_nonnegative()?;
    Ok(out)
}

/// Tag of the stabilizer `sub` acting on the points of a structure of
/// degree `d`: its X-points, plus `(d - n) / |sub|` regular orbits coming
/// from the filled slots (the action on the slots is free).
fn image_tag(sub: &PermGroupTwoSort, d: usize) -> Result<MolecularTag, MolecularError> {
    let n = sub.n();
    let order = sub.order();
    let inner = d - n;
    let copies = if inner == 0 { 0 } else { inner / order };
    let orbit: Vec<usize> = if copies > 0 {
        sub.y_orbits().into_iter().next().unwrap_or_default()
    } else {
        vec![]
    };
    let perms: Vec<Perm> = sub
        .elements()
        .iter()
        .map(|e| {
            let mut p: Perm = e.x.clone();
            p.resize(n + copies * orbit.len(), 0);
            for c in 0..copies {
                let base = n + c * orbit.len();
                for (from, &j) in orbit.iter().enumerate() {
                    let to = orbit.iter().position(|&o| o == e.y[j]).expect("orbit");
                    p[base + from] = base + to;
                }
            }
            p
        })
        .collect();
    classify_action(n + copies * orbit.len(), &perms).ok_or(MolecularError::Unclassified {
        order: perms.iter().collect::<BTreeSet<_>>().len(),
        degree: d,
    })
}

fn one_sort_slots(outer: BuiltinSpecies) -> PermGroupTwoSort {
    match outer {
        BuiltinSpecies::E2 => PermGroupTwoSort::symmetric(2).swap_sorts(),
        BuiltinSpecies::C3 => PermGroupTwoSort::cyclic(3).swap_sorts(),
        _ => unreachable!("only E2 and C3 are substituted"),
    }
}

/// `E2(B)` for an asymmetric species `B`.
pub fn add_e2(b: &UniSeries) -> Result<MolecularExpansion, MolecularError> {
    substitute_asymmetric(&one_sort_slots(BuiltinSpecies::E2), b)
}

/// `C3(B)` for an asymmetric species `B`.
pub fn add_c3(b: &UniSeries) -> Result<MolecularExpansion, MolecularError> {
    substitute_asymmetric(&one_sort_slots(BuiltinSpecies::C3), b)
}

/// `P4bic(X, B)` for an asymmetric species `B`.
pub fn add_p4bic(b: &UniSeries) -> Result<MolecularExpansion, MolecularError> {
    substitute_asymmetric(&PermGroupTwoSort::p4bic(), b)
}

/// `P6bic(X, B)` for an asymmetric species `B`.
pub fn add_p6bic(b: &UniSeries) -> Result<MolecularExpansion, MolecularError> {
    substitute_asymmetric(&PermGroupTwoSort::p6bic(), b)
}

/// Product of two asymmetric species, itself asymmetric.
pub fn asymmetric_product(
    b: &UniSeries,
    c: &UniSeries,
) -> Result<MolecularExpansion, MolecularError> {
    MolecularExpansion::from_asymmetric(&(b * c))
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Coefficient of `x^(num/den)` in `B^power`, zero at fractional or negative
/// indices.
struct PowerTable {
    powers: Vec<UniSeries>,
}

impl PowerTable {
    fn new(b: &UniSeries, max_power: u32) -> Self {
        let mut powers = vec![UniSeries::one(b.order())];
        for _ in 0..max_power {
            let next = powers.last().expect("nonempty") * b;
            powers.push(next);
        }
        PowerTable { powers }
    }

    fn at(&self, power: usize, num: i64, den: i64) -> Rational {
        if num < 0 || num % den != 0 {
            return Rational::zero();
        }
        let k = (num / den) as usize;
        let s = &self.powers[power];
        if k > s.order() {
            Rational::zero()
        } else {
            s.coeff(k)
        }
    }
}

/// `E2(B)` from the closed-form coefficients `alpha_k`.
pub fn printed_add_e2(b: &UniSeries) -> PrintedExpansion {
    let d = b.order() as i64;
    let t = PowerTable::new(b, 2);
    let mut out = PrintedExpansion::new(d as u32);
    let b0 = t.at(1, 0, 1);
    out.add_term(MolecularTag::One, (&b0 * &b0 + &b0) / rat(2, 1));
    for k in 1..=d {
        let alpha = (t.at(2, k, 1) - t.at(1, k, 2)) / rat(2, 1);
        out.add_term(MolecularTag::Xpow(k as u32), alpha);
        out.add_term(MolecularTag::E2k(k as u32), t.at(1, k, 1));
    }
    out
}

/// `C3(B)` from the closed-form coefficients `beta_k`.
pub fn printed_add_c3(b: &UniSeries) -> PrintedExpansion {
    let d = b.order() as i64;
    let t = PowerTable::new(b, 3);
    let mut out = PrintedExpansion::new(d as u32);
    let b0 = t.at(1, 0, 1);
    out.add_term(
        MolecularTag::One,
        (&b0 * &b0 * &b0 + &b0 * rat(2, 1)) / rat(3, 1),
    );
    for k in 1..=d {
        let beta = (t.at(3, k, 1) - t.at(1, k, 3)) / rat(3, 1);
        out.add_term(MolecularTag::Xpow(k as u32), beta);
        out.add_term(MolecularTag::C3k(k as u32), t.at(1, k, 1));
    }
    out
}

/// `P4bic(X, B)` from the closed-form coefficients, with the printed ranges
/// `X^k (k >= 3)`, `E2(X^k) (k >= 2)`, `X^2 E2(X^k) (k >= 1)`,
/// `P4bic(X, X^k) (k >= 0)`.
pub fn printed_add_p4bic(b: &UniSeries) -> PrintedExpansion {
    let d = b.order() as i64;
    let t = PowerTable::new(b, 4);
    let mut out = PrintedExpansion::new(d as u32);
    for k in 0..=d {
        let ku = k as u32;
        if k >= 3 {
            let c = t.at(4, k - 2, 1) * rat(1, 4) - t.at(2, k - 2, 2) * rat(3, 4)
                + t.at(1, k - 2, 4) * rat(1, 2);
            out.add_term(MolecularTag::Xpow(ku), c);
        }
        if k >= 2 {
            out.add_term(MolecularTag::E2k(ku), t.at(2, k - 1, 1) - t.at(1, k - 1, 2));
        }
        if k >= 1 {
            out.add_term(
                MolecularTag::X2E2k(ku),
                (t.at(2, k, 1) - t.at(1, k, 2)) * rat(1, 2),
            );
        }
        out.add_term(MolecularTag::P4bick(ku), t.at(1, k, 1));
    }
    out
}

/// `P6bic(X, B)` from the closed-form coefficients, with the printed ranges
/// `X^k (k >= 4)`, `X E2(X^k) (k >= 2)`, `C3(X^k) (k >= 2)`,
/// `P6bic(X, X^k) (k >= 0)`.
pub fn printed_add_p6bic(b: &UniSeries) -> PrintedExpansion {
    let d = b.order() as i64;
    let t = PowerTable::new(b, 6);
    let mut out = PrintedExpansion::new(d as u32);
    for k in 0..=d {
        let ku = k as u32;
        if k >= 4 {
            let c = t.at(6, k - 3, 1) * rat(1, 6) - t.at(3, k - 3, 2) * rat(1, 2)
                + t.at(2, k - 3, 3) * rat(1, 3)
                + t.at(1, k - 3, 6) * rat(2, 3);
            out.add_term(MolecularTag::Xpow(ku), c);
        }
        if k >= 2 {
            out.add_term(
                MolecularTag::XE2k(ku),
                t.at(3, k - 1, 1) - t.at(1, k - 1, 3),
            );
            out.add_term(
                MolecularTag::C3k(ku),
                (t.at(2, k - 1, 1) - t.at(1, k - 1, 2)) * rat(1, 2),
            );
        }
        out.add_term(MolecularTag::P6bick(ku), t.at(1, k, 1));
    }
    out
}

fn c(num: i64, den: i64) -> Rational {
    catq(num, den)
}

/// The `B = A` specializations of the `E2` and `C3` addition formulas.
pub fn printed_e2_of_a(max_degree: u32) -> PrintedExpansion {
    let mut out = PrintedExpansion::new(max_degree);
    out.add_term(MolecularTag::One, Rational::one());
    for k in 1..=max_degree as i64 {
        out.add_term(
            MolecularTag::Xpow(k as u32),
            (c(k + 1, 1) - c(k, 2)) * rat(1, 2),
        );
        out.add_term(MolecularTag::E2k(k as u32), c(k, 1));
    }
    out
}

pub fn printed_c3_of_a(max_degree: u32) -> PrintedExpansion {
    let mut out = PrintedExpansion::new(max_degree);
    out.add_term(MolecularTag::One, Rational::one());
    for k in 1..=max_degree as i64 {
        out.add_term(
            MolecularTag::Xpow(k as u32),
            (c(k + 2, 1) - c(k + 1, 1) - c(k, 3)) * rat(1, 3),
        );
        out.add_term(MolecularTag::C3k(k as u32), c(k, 1));
    }
    out
}

/// The `B = A` specialization of the `P4bic` addition formula.
pub fn printed_p4bic_of_a(max_degree: u32) -> PrintedExpansion {
    let mut out = PrintedExpansion::new(max_degree);
    for k in 0..=max_degree as i64 {
        let ku = k as u32;
        if k >= 3 {
            let a1 = c(k + 1, 1) * rat(1, 4) - c(k, 1) * rat(1, 2) - c(k, 2) * rat(3, 4)
                + c(k - 2, 4) * rat(1, 2);
            out.add_term(MolecularTag::Xpow(ku), a1);
        }
        if k >= 2 {
            out.add_term(MolecularTag::E2k(ku), c(k, 1) - c(k - 1, 2));
        }
        if k >= 1 {
            out.add_term(MolecularTag::X2E2k(ku), (c(k + 1, 1) - c(k, 2)) * rat(1, 2));
        }
        out.add_term(MolecularTag::P4bick(ku), c(k, 1));
    }
    out
}

/// The `B = A` specialization of the `P6bic` addition formula.
pub fn printed_p6bic_of_a(max_degree: u32) -> PrintedExpansion {
    let mut out = PrintedExpansion::new(max_degree);
    for k in 0..=max_degree as i64 {
        let ku = k as u32;
        if k >= 4 {
            let d1 = c(k + 2, 1) * rat(1, 6) - c(k + 1, 1) * rat(2, 3) + c(k, 1) * rat(1, 2)
                - c(k + 1, 2) * rat(1, 2)
                + c(k - 1, 2) * rat(1, 2)
                - c(k, 3) * rat(1, 6)
                + c(k - 3, 6) * rat(1, 2);
            out.add_term(MolecularTag::Xpow(ku), d1);
        }
        if k >= 2 {
            out.add_term(MolecularTag::XE2k(ku), c(k + 1, 1) - c(k, 1) - c(k - 1, 3));
            out.add_term(MolecularTag::C3k(ku), (c(k, 1) - c(k - 1, 2)) * rat(1, 2));
        }
        out.add_term(MolecularTag::P6bick(ku), c(k, 1));
    }
    out
}

/// Plane 2-trees from the closed-form coefficients `b_k`, `c_k`, `d_k`.
pub fn plane_closed_form(max_degree: u32) -> PrintedExpansion {
    let mut out = PrintedExpansion::new(max_degree);
    out.add_term(MolecularTag::One, Rational::one());
    out.add_term(MolecularTag::Xpow(1), Rational::one());
    for k in 1..=max_degree as i64 {
        let ku = k as u32;
        if k >= 2 {
            let bk = c(k, 1) * rat(2, 3)
                - c(k + 1, 1) * rat(1, 6)
                - c(k, 2) * rat(1, 2)
                - c(k - 1, 3) * rat(1, 3);
            out.add_term(MolecularTag::Xpow(ku), bk);
        }
        out.add_term(MolecularTag::E2k(ku), c(k, 1));
        out.add_term(MolecularTag::XC3k(ku), c(k, 1));
    }
    out
}

fn a_plus(order: usize) -> UniSeries {
    &a_series(order) - &UniSeries::one(order)
}

/// The three pointed plane species: edge `E2(A)`, triangle `X C3(A)`, and
/// triangle with a distinguished edge `A_+ A`.
pub fn plane_pointed_expansions(max_degree: u32) -> Result<PointedExpansions, MolecularError> {
    let d = max_degree as usize;
    let a = a_series(d);
    Ok(PointedExpansions {
        edge: add_e2(&a)?,
        triangle: add_c3(&a.truncate(d.saturating_sub(1)))?.times_x()?,
        flag: asymmetric_product(&a_plus(d), &a)?,
    })
}

/// The molecular expansion of plane 2-trees by the dissymmetry combination
/// of the pointed species, checked term by term against the closed form.
pub fn plane_expansion(max_degree: u32) -> Result<MolecularExpansion, MolecularError> {
    let pointed = plane_pointed_expansions(max_degree)?;
    let compositional = pointed.dissymmetry()?;
    let closed = plane_closed_form(max_degree);
    if let Some(d) = compare_expansions("plane", &closed, &compositional)
        .into_iter()
        .next()
    {
        return Err(MolecularError::RouteMismatch {
            tag: d.item,
            closed: d.printed.to_string(),
            compositional: d.canonical.to_string(),
        });
    }
    Ok(compositional)
}

/// Expansions of a family pointed at an edge, a triangle, and a triangle
/// with one of its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedExpansions {
    pub edge: MolecularExpansion,
    pub triangle: MolecularExpansion,
    pub flag: MolecularExpansion,
}

impl PointedExpansions {
    /// `edge + triangle - flag`.
    pub fn dissymmetry(&self) -> Result<MolecularExpansion, MolecularError> {
        self.edge.add(&self.triangle).checked_sub(&self.flag)
    }
}

/// The three pointed planar species, assembled from substitutions into
/// `E2`, `P4bic` and `P6bic`.
pub fn planar_pointed_expansions(max_degree: u32) -> Result<PointedExpansions, MolecularError> {
    let d = max_degree as usize;
    let a = a_series(d);
    let at = |k: usize| a.truncate(d.saturating_sub(k));

    let mut edge = MolecularExpansion::new(max_degree);
    edge.add_term(MolecularTag::One, BigInt::one())?;
    let edge = edge.add(&add_e2(&at(1))?.times_x()?).add(&add_p4bic(&a)?);

    let mut triangle = MolecularExpansion::new(max_degree);
    triangle.add_term(MolecularTag::Xpow(1), BigInt::one())?;
    let ap = a_plus(d.saturating_sub(1));
    let triangle = triangle
        .add(&add_e2(&at(2))?.times_x()?.times_x()?)
        .add(&add_e2(&ap)?.times_x()?)
        .add(&add_p6bic(&at(1))?.times_x()?);

    let a2 = &at(2) * &at(2);
    let flag = add_e2(&at(1))?
        .times_x()?
        .add(&add_e2(&a2)?.times_x()?.times_x()?);

    Ok(PointedExpansions {
        edge: edge.truncate(max_degree),
        triangle: triangle.truncate(max_degree),
        flag: flag.truncate(max_degree),
    })
}

/// The molecular expansion of planar 2-trees by the dissymmetry combination.
pub fn planar_expansion(max_degree: u32) -> Result<MolecularExpansion, MolecularError> {
    planar_pointed_expansions(max_degree)?.dissymmetry()
}

/// Closed-form coefficients of the edge-pointed planar expansion.
pub fn printed_planar_edge(max_degree: u32) -> PrintedExpansion {
    use MolecularTag::*;
    let mut out = PrintedExpansion::new(max_degree);
    out.add_term(One, Rational::one());
    for k in 0..=max_degree as i64 {
        let ku = k as u32;
        let a1 = c(k + 1, 1) * rat(1, 4) - c(k, 2) * rat(3, 4) - c(k - 1, 2) * rat(1, 2)
            + c(k - 2, 4) * rat(1, 2);
        out.add_term(Xpow(ku), a1);
        if k >= 1 {
            out.add_term(E2k(ku), c(k, 1) - c(k - 1, 2));
            out.add_term(XE2k(ku), c(k, 1));
            out.add_term(X2E2k(ku), (c(k + 1, 1) - c(k, 2)) * rat(1, 2));
            out.add_term(P4bick(ku), c(k, 1));
        }
    }
    out
}

/// Closed-form coefficients of the triangle-pointed planar expansion.
pub fn printed_planar_triangle(max_degree: u32) -> PrintedExpansion {
    use MolecularTag::*;
    let mut out = PrintedExpansion::new(max_degree);
    out.add_term(One, Rational::one());
    for k in 0..=max_degree as i64 {
        let ku = k as u32;
        let a1 = (c(k + 1, 1) - c(k, 1)) * rat(1, 6)
            - c(k, 2) * rat(1, 2)
            - c(k - 2, 2)
            - c(k - 1, 2) * rat(1, 2)
            - c(k - 1, 3) * rat(1, 6)
            + c(k - 4, 6) * rat(1, 2);
        out.add_term(Xpow(ku), a1);
        if k >= 1 {
            out.add_term(XE2k(ku), c(k, 1));
        }
        if k >= 2 {
            out.add_term(X2E2k(ku), c(k + 1, 1) - c(k - 1, 3));
            out.add_term(XC3k(ku), (c(k, 1) - c(k - 1, 2)) * rat(1, 2));
            out.add_term(XP6bick(ku), c(k, 1));
        }
    }
    out
}

/// Closed-form coefficients of the planar expansion pointed at a triangle
/// with a distinguished edge.
pub fn printed_planar_flag(max_degree: u32) -> PrintedExpansion {
    use MolecularTag::*;
    let mut out = PrintedExpansion::new(max_degree);
    for k in 0..=max_degree as i64 {
        let ku = k as u32;
        let a1 = (c(k + 1, 1) - c(k, 1) - c(k - 1, 2) - c(k, 2)) * rat(1, 2);
        out.add_term(Xpow(ku), a1);
        if k >= 1 {
            out.add_term(XE2k(ku), c(k, 1));
            out.add_term(X2E2k(ku), c(k + 1, 1));
        }
    }
    out
}

/// Closed-form coefficients `a_k^1 .. a_k^7` of the planar expansion.
pub fn printed_planar(max_degree: u32) -> PrintedExpansion {
    use MolecularTag::*;
    let mut out = PrintedExpansion::new(max_degree);
    out.add_term(One, Rational::one());
    for k in 0..=max_degree as i64 {
        let ku = k as u32;
        if k >= 1 {
            let a1 = -c(k + 1, 1) * rat(1, 12) + c(k, 1) * rat(1, 3)
                - c(k, 2) * rat(3, 4)
                - c(k - 1, 2) * rat(1, 2)
                - c(k - 1, 3) * rat(1, 6)
                + c(k - 2, 4) * rat(1, 2)
                + c(k - 4, 6) * rat(1, 2);
            out.add_term(Xpow(ku), a1);
            out.add_term(E2k(ku), c(k, 1) - c(k - 1, 2));
            out.add_term(XE2k(ku), c(k, 1));
        }
        if k >= 2 {
            out.add_term(X2E2k(ku), (c(k + 1, 1) - c(k, 2)) * rat(1, 2) - c(k - 1, 3));
            out.add_term(XC3k(ku), (c(k, 1) - c(k - 1, 2)) * rat(1, 2));
        }
        out.add_term(P4bick(ku), c(k, 1));
        out.add_term(XP6bick(ku), c(k, 1));
    }
    out
}

/// Index series of a single tag, from the closed forms of `E2`, `C3`,
/// `E3`, `P4bic`, `P6bic` by substitution of `X^k`.
pub fn tag_index_series(tag: MolecularTag, kind: IndexKind, cap: u32) -> IndexSeries {
    use MolecularTag::*;
    let x = IndexSeries::var(Sorts::One, cap, Var::X(1));
    let xk = |k: u32| x.pow(k);
    let t = tag.canonical();
    let (prefix, core) = match t {
        One => (0, IndexSeries::one(Sorts::One, cap)),
        Xpow(k) => (0, xk(k)),
        E2k(k) | XE2k(k) | X2E2k(k) => {
            let p = match t {
                E2k(_) => 0,
                XE2k(_) => 1,
                _ => 2,
            };
            let s = builtin(BuiltinSpecies::E2, kind, cap)
                .plethysm(&xk(k))
                .expect("one-sort");
            (p, s)
        }
        C3k(k) | XC3k(k) => {
            let p = u32::from(matches!(t, XC3k(_)));
            let s = builtin(BuiltinSpecies::C3, kind, cap)
                .plethysm(&xk(k))
                .expect("one-sort");
            (p, s)
        }
        P4bick(k) => {
            let s = builtin(BuiltinSpecies::P4bic, kind, cap)
                .substitute(&x, Some(&xk(k)))
                .expect("two-sort");
            (0, s)
        }
        P6bick(k) | XP6bick(k) => {
            let p = u32::from(matches!(t, XP6bick(_)));
            let s = if k == 0 {
                builtin(BuiltinSpecies::E3, kind, cap)
            } else {
                builtin(BuiltinSpecies::P6bic, kind, cap)
                    .substitute(&x, Some(&xk(k)))
                    .expect("two-sort")
            };
            (p, s)
        }
    };
    &xk(prefix) * &core
}

/// Linear extension of [`tag_index_series`].
pub fn expansion_to_index_series(m: &MolecularExpansion, kind: IndexKind, cap: u32) -> IndexSeries {
    let mut out = IndexSeries::zero(Sorts::One, cap);
    for (t, c) in m.terms() {
        if t.degree() > cap {
            continue;
        }
        let s = tag_index_series(*t, kind, cap).scale(&Rational::from_integer(c.clone()));
        out = &out + &s;
    }
    out
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species_index::{
        gamma_compose_nonzero_const, gamma_from_group, index_of_substitution, z_from_group, Outer,
    };

    fn uni(coeffs: &[i64], order: usize) -> UniSeries {
        UniSeries::from_integers(order, coeffs)
    }

    #[test]
    fn tag_degrees_and_rendering() {
        use MolecularTag::*;
        assert_eq!(XP6bick(1).degree(), 10);
        assert_eq!(P4bick(1).degree(), 6);
        assert_eq!(P4bick(0).canonical(), E2k(1));
        assert_eq!(XP6bick(0).to_string(), "X*E3(X)");
        assert_eq!(XC3k(2).to_string(), "X*C3(X^2)");
        assert_eq!(P4bick(1).to_string(), "P4bic(X,X)");
        assert!(X2E2k(1).times_x().is_err());
        assert_eq!(C3k(2).times_x().unwrap(), XC3k(2));
    }

    #[test]
    fn representative_groups_classify_back() {
        use MolecularTag::*;
        for t in [
            Xpow(3),
            E2k(2),
            XE2k(1),
            X2E2k(3),
            C3k(2),
            XC3k(1),
            P4bick(1),
            P4bick(2),
            P6bick(0),
            P6bick(1),
            XP6bick(0),
            XP6bick(1),
        ] {
            let g = t.representative_group();
            assert_eq!(g.n(), t.degree() as usize);
            assert_eq!(g.order(), t.stabilizer_order());
            let perms: Vec<Perm> = g.elements().iter().map(|e| e.x.clone()).collect();
            assert_eq!(classify_action(g.n(), &perms), Some(t), "{t}");
        }
    }

    #[test]
    fn tag_series_agree_with_group_route() {
        use MolecularTag::*;
        let cap = 12;
        for t in [
            E2k(2),
            XE2k(1),
            X2E2k(2),
            C3k(2),
            XC3k(1),
            P4bick(1),
            P6bick(0),
            P6bick(1),
            XP6bick(0),
            XP6bick(1),
        ] {
            let g = t.representative_group();
            assert_eq!(
                tag_index_series(t, IndexKind::Z, cap),
                z_from_group(&g, cap),
                "{t}"
            );
            assert_eq!(
                tag_index_series(t, IndexKind::Gamma, cap),
                gamma_from_group(&g, cap, 24).unwrap(),
                "{t}"
            );
        }
        let g = tag_index_series(XC3k(2), IndexKind::Gamma, 12);
        assert_eq!(g.to_string(), "1/3*x1^7 - 1/3*x1*x3^2");
    }

    #[test]
    fn small_addition_formulas() {
        let b = uni(&[1, 1], 1);
        assert_eq!(add_e2(&b).unwrap().to_string(), "1 + X");
        let b = uni(&[1, 1, 0, 0], 3);
        assert_eq!(add_e2(&b).unwrap().to_string(), "1 + X + E2(X)");
        assert_eq!(add_c3(&b).unwrap().to_string(), "1 + X + X^2 + C3(X)");
    }

    #[test]
    fn e2_c3_formulas_match_generic_route() {
        for coeffs in [
            vec![1, 1, 2, 5, 14, 42, 132, 429],
            vec![0, 2, 1, 0, 3, 1, 1, 2],
            vec![2, 1, 3, 0, 1, 0, 2, 1],
        ] {
            let b = uni(&coeffs, 7);
            let e2 = add_e2(&b).unwrap();
            assert!(compare_expansions("e2", &printed_add_e2(&b), &e2).is_empty());
            let c3 = add_c3(&b).unwrap();
            assert!(compare_expansions("c3", &printed_add_c3(&b), &c3).is_empty());
        }
    }

    #[test]
    fn p4bic_of_a_generic_route() {
        let a = a_series(12);
        let p4 = add_p4bic(&a).unwrap();
        for k in 0..=1u32 {
            assert_eq!(
                p4.coeff(MolecularTag::P4bick(k + 1)),
                crate::catalan(k as u64 + 1)
            );
        }
        // index series of the expansion equals substitution into Z_{P4bic}
        let cap = 12;
        let x = IndexSeries::var(Sorts::One, cap, Var::X(1));
        let a_x = IndexSeries::from_uni(Sorts::One, cap, Var::X(1), &a);
        let z = builtin(BuiltinSpecies::P4bic, IndexKind::Z, cap)
            .substitute(&x, Some(&a_x))
            .unwrap();
        assert_eq!(expansion_to_index_series(&p4, IndexKind::Z, cap), z);
        let ap = &a_x - &IndexSeries::one(Sorts::One, cap);
        let g = index_of_substitution(&PermGroupTwoSort::p4bic(), IndexKind::Gamma, 1, &ap, 24)
            .unwrap();
        assert_eq!(expansion_to_index_series(&p4, IndexKind::Gamma, cap), g);
    }

    #[test]
    fn e2_of_a_gamma() {
        let cap = 10;
        let a = a_series(cap as usize);
        let e2 = add_e2(&a).unwrap();
        let a_x = IndexSeries::from_uni(Sorts::One, cap, Var::X(1), &a);
        let g = gamma_compose_nonzero_const(Outer::E2, &a_x, &Rational::one());
        assert_eq!(expansion_to_index_series(&e2, IndexKind::Gamma, cap), g);
    }

    #[test]
    fn plane_expansion_low_degrees() {
        let p = plane_expansion(5).unwrap();
        assert_eq!(
            p.to_string(),
            "1 + X + E2(X) + X^3 + X*C3(X) + 2*E2(X^2) + X^4 + 6*X^5"
        );
        assert_eq!(plane_expansion(0).unwrap().to_string(), "1");
    }

    #[test]
    fn planar_expansion_low_degrees() {
        let p = planar_expansion(5).unwrap();
        assert_eq!(
            p.to_string(),
            "1 + X + E2(X) + X*E2(X) + X*E3(X) + 2*E2(X^2) + 2*X*E2(X^2) + 2*X^5"
        );
    }

    #[test]
    fn subtraction_rejects_negative() {
        let mut a = MolecularExpansion::new(3);
        a.add_term(MolecularTag::Xpow(1), BigInt::one()).unwrap();
        let mut b = MolecularExpansion::new(3);
        b.add_term(MolecularTag::Xpow(1), BigInt::from(2)).unwrap();
        assert!(a.checked_sub(&b).is_err());
    }
}
