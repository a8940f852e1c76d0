//! Cycle and asymmetry index series of molecular species `X^n Y^m / H`.
//!
//! Series are computed from the stabilizer group `H` (a cycle-type average
//! for `Z`, a Möbius sum over the subgroup lattice for `Gamma`) and from the
//! known closed forms, so the two can be checked against each other.
//! One-sort species are groups with `m = 0`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{IndexSeries, Monomial, SeriesError, Sorts, Var};
use crate::Rational;

/// Largest group whose subgroup lattice is enumerated by default.
pub const DEFAULT_SUBGROUP_BOUND: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element has wrong degree (expected {expected_x} x-points and {expected_y} y-points)")]
    DegreeMismatch {
        expected_x: usize,
        expected_y: usize,
    },
    #[error("not a permutation")]
    NotAPermutation,
    #[error("element set does not contain the identity")]
    MissingIdentity,
    #[error("element set is not closed under composition")]
    NotClosed,
    #[error("group of order {order} exceeds the subgroup enumeration bound {bound}")]
    TooLarge { order: usize, bound: usize },
    #[error("group action on the y-points is not free")]
    NotFreeOnY,
    #[error("substituted series must have zero constant term")]
    NonzeroConstant,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Permutation of `0..len` as its image vector.
pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// `(a * b)(i) = a(b(i))`.
pub fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn inverse(a: &Perm) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Permutation of `0..n` from disjoint cycles.
pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Perm {
    let mut p = identity(n);
    for cycle in cycles {
        for (k, &i) in cycle.iter().enumerate() {
            p[i] = cycle[(k + 1) % cycle.len()];
        }
    }
    p
}

fn is_permutation(p: &Perm) -> bool {
    let mut seen = vec![false; p.len()];
    for &i in p {
        if i >= p.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// `counts[l - 1]` is the number of cycles of length `l`.
pub fn cycle_type(p: &Perm) -> Vec<u32> {
    let mut counts = vec![0u32; p.len()];
    let mut seen = vec![false; p.len()];
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        counts[len - 1] += 1;
    }
    counts
}

/// Element of `S_n^X x S_m^Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoSortPerm {
    pub x: Perm,
    pub y: Perm,
}

impl TwoSortPerm {
    pub fn new(x: Perm, y: Perm) -> Self {
        TwoSortPerm { x, y }
    }

    pub fn identity(n: usize, m: usize) -> Self {
        TwoSortPerm::new(identity(n), identity(m))
    }

    pub fn compose(&self, other: &TwoSortPerm) -> TwoSortPerm {
        TwoSortPerm::new(compose(&self.x, &other.x), compose(&self.y, &other.y))
    }

    pub fn inverse(&self) -> TwoSortPerm {
        TwoSortPerm::new(inverse(&self.x), inverse(&self.y))
    }

    fn is_identity(&self) -> bool {
        self.x.iter().enumerate().all(|(i, &j)| i == j)
            && self.y.iter().enumerate().all(|(i, &j)| i == j)
    }
}

fn cycle_monomial(x_counts: &[u32], y_counts: &[u32]) -> Monomial {
    let mut pairs = Vec::new();
    for (l, &c) in x_counts.iter().enumerate() {
        if c > 0 {
            pairs.push((Var::X(l as u32 + 1), c));
        }
    }
    for (l, &c) in y_counts.iter().enumerate() {
        if c > 0 {
            pairs.push((Var::Y(l as u32 + 1), c));
        }
    }
    Monomial::from_pairs(&pairs)
}

/// A permutation group `H <= S_n^X x S_m^Y`, stored as its full element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroupTwoSort {
    n: usize,
    m: usize,
    elements: Vec<TwoSortPerm>,
}

impl PermGroupTwoSort {
    /// Validates degrees, identity and closure.
    pub fn new(n: usize, m: usize, elements: Vec<TwoSortPerm>) -> Result<Self, GroupError> {
        let set: BTreeSet<TwoSortPerm> = elements.into_iter().collect();
        for e in &set {
            if e.x.len() != n || e.y.len() != m {
                return Err(GroupError::DegreeMismatch {
                    expected_x: n,
                    expected_y: m,
                });
            }
            if !is_permutation(&e.x) || !is_permutation(&e.y) {
                return Err(GroupError::NotAPermutation);
            }
        }
        if !set.contains(&TwoSortPerm::identity(n, m)) {
            return Err(GroupError::MissingIdentity);
        }
        for a in &set {
            for b in &set {
                if !set.contains(&a.compose(b)) {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        Ok(PermGroupTwoSort {
            n,
            m,
            elements: set.into_iter().collect(),
        })
    }

    /// The subgroup generated by `gens`.
    pub fn generated(n: usize, m: usize, gens: &[TwoSortPerm]) -> Result<Self, GroupError> {
        let mut set: BTreeSet<TwoSortPerm> = BTreeSet::new();
        let id = TwoSortPerm::identity(n, m);
        set.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(e) = frontier.pop() {
            for g in gens {
                if g.x.len() != n || g.y.len() != m {
                    return Err(GroupError::DegreeMismatch {
                        expected_x: n,
                        expected_y: m,
                    });
                }
                let p = g.compose(&e);
                if set.insert(p.clone()) {
                    frontier.push(p);
                }
            }
        }
        Self::new(n, m, set.into_iter().collect())
    }

    pub fn trivial(n: usize, m: usize) -> Self {
        Self::generated(n, m, &[]).expect("trivial group")
    }

    /// `S_n` acting on `n` points of sort X.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(TwoSortPerm::new(from_cycles(n, &[&[0, 1]]), vec![]));
            let cyc: Vec<usize> = (0..n).collect();
            gens.push(TwoSortPerm::new(from_cycles(n, &[&cyc]), vec![]));
        }
        Self::generated(n, 0, &gens).expect("symmetric group")
    }

    /// `Z_n` generated by the rotation `(0, 1, ..., n-1)` of X-points.
    pub fn cyclic(n: usize) -> Self {
        let cyc: Vec<usize> = (0..n).collect();
        let gens = if n >= 2 {
            vec![TwoSortPerm::new(from_cycles(n, &[&cyc]), vec![])]
        } else {
            vec![]
        };
        Self::generated(n, 0, &gens).expect("cyclic group")
    }

    /// Stabilizer of a bicoloured 4-gon: `D2 = <h, v>` on 2 X-points `a, b`
    /// and 4 Y-points `1..4`, with `h = (a,b)(1,2)(3,4)`, `v = (1,4)(2,3)`.
    pub fn p4bic() -> Self {
        let h = TwoSortPerm::new(
            from_cycles(2, &[&[0, 1]]),
            from_cycles(4, &[&[0, 1], &[2, 3]]),
        );
        let v = TwoSortPerm::new(identity(2), from_cycles(4, &[&[0, 3], &[1, 2]]));
        Self::generated(2, 4, &[h, v]).expect("D2")
    }

    /// Stabilizer of a bicoloured 6-gon: `S3 = <s, w>` on 3 X-points `a, b, c`
    /// and 6 Y-points, with `s = (b,c)(1,2)(3,6)(4,5)`,
    /// `w = (a,b,c)(1,3,5)(2,4,6)`.
    pub fn p6bic() -> Self {
        let s = TwoSortPerm::new(
            from_cycles(3, &[&[1, 2]]),
            from_cycles(6, &[&[0, 1], &[2, 5], &[3, 4]]),
        );
        let w = TwoSortPerm::new(
            from_cycles(3, &[&[0, 1, 2]]),
            from_cycles(6, &[&[0, 2, 4], &[1, 3, 5]]),
        );
        Self::generated(3, 6, &[s, w]).expect("S3")
    }

    /// The same group with the roles of X- and Y-points exchanged.
    pub fn swap_sorts(&self) -> Self {
        PermGroupTwoSort {
            n: self.m,
            m: self.n,
            elements: self
                .elements
                .iter()
                .map(|e| TwoSortPerm::new(e.y.clone(), e.x.clone()))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[TwoSortPerm] {
        &self.elements
    }

    fn sorts(&self) -> Sorts {
        if self.m == 0 {
            Sorts::One
        } else {
            Sorts::Two
        }
    }

    /// Orbit sizes of the group on X-points and on Y-points, as counts:
    /// `(x_counts, y_counts)` with `counts[l - 1]` orbits of size `l`.
    pub fn orbit_counts(&self) -> (Vec<u32>, Vec<u32>) {
        (
            orbit_size_counts(self.n, self.elements.iter().map(|e| &e.x)),
            orbit_size_counts(self.m, self.elements.iter().map(|e| &e.y)),
        )
    }

    /// Orbits on the Y-points.
    pub fn y_orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.m, self.elements.iter().map(|e| &e.y))
    }
}

fn orbits<'a>(len: usize, perms: impl Iterator<Item = &'a Perm> + Clone) -> Vec<Vec<usize>> {
    let mut seen = vec![false; len];
    let mut out = Vec::new();
    for start in 0..len {
        if seen[start] {
            continue;
        }
        let mut orbit = BTreeSet::new();
        orbit.insert(start);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for p in perms.clone() {
                if orbit.insert(p[i]) {
                    stack.push(p[i]);
                }
            }
        }
        for &i in &orbit {
            seen[i] = true;
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

fn orbit_size_counts<'a>(len: usize, perms: impl Iterator<Item = &'a Perm> + Clone) -> Vec<u32> {
    let mut counts = vec![0u32; len];
    for o in orbits(len, perms) {
        counts[o.len() - 1] += 1;
    }
    counts
}

/// A subgroup together with `mu({1}, V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupLatticeEntry {
    pub subgroup: PermGroupTwoSort,
    pub moebius: i64,
}

/// All subgroups of a small group, with containment, Möbius values and
/// conjugation. Subgroups are bitmasks over the element list.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group: PermGroupTwoSort,
    masks: Vec<u64>,
    mobius: Vec<Vec<i64>>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl SubgroupLattice {
    pub fn new(group: &PermGroupTwoSort, bound: usize) -> Result<Self, GroupError> {
        let order = group.order();
        if order > bound.min(64) {
            return Err(GroupError::TooLarge {
                order,
                bound: bound.min(64),
            });
        }
        let index: HashMap<&TwoSortPerm, usize> = group
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mul: Vec<Vec<usize>> = group
            .elements
            .iter()
            .map(|a| {
                group
                    .elements
                    .iter()
                    .map(|b| index[&a.compose(b)])
                    .collect()
            })
            .collect();
        let inv: Vec<usize> = group.elements.iter().map(|a| index[&a.inverse()]).collect();
        let id = group
            .elements
            .iter()
            .position(|e| e.is_identity())
            .expect("identity");

        let closure = |seed: u64| -> u64 {
            let mut mask = seed | (1 << id);
            loop {
                let mut next = mask;
                for a in 0..order {
                    if mask >> a & 1 == 0 {
                        continue;
                    }
                    for b in 0..order {
                        if mask >> b & 1 == 1 {
                            next |= 1 << mul[a][b];
                        }
                    }
                }
                if next == mask {
                    return mask;
                }
                mask = next;
            }
        };

        // Every subgroup is a join of cyclic subgroups; close the set of
        // cyclic subgroups under pairwise joins.
        let mut found: BTreeSet<u64> = (0..order).map(|a| closure(1 << a)).collect();
        found.insert(1 << id);
        loop {
            let current: Vec<u64> = found.iter().copied().collect();
            let mut added = false;
            for (i, &a) in current.iter().enumerate() {
                for &b in &current[i + 1..] {
                    if found.insert(closure(a | b)) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        let mut masks: Vec<u64> = found.into_iter().collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));

        let k = masks.len();
        let mut mobius = vec![vec![0i64; k]; k];
        for i in 0..k {
            mobius[i][i] = 1;
            for j in i + 1..k {
                if masks[i] & masks[j] != masks[i] {
                    continue;
                }
                let s: i64 = (i..j)
                    .filter(|&l| masks[i] & masks[l] == masks[i] && masks[l] & masks[j] == masks[l])
                    .map(|l| mobius[i][l])
                    .sum();
                mobius[i][j] = -s;
            }
        }
        Ok(SubgroupLattice {
            group: group.clone(),
            masks,
            mobius,
            mul,
            inv,
        })
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Index of the trivial subgroup.
    pub fn bottom(&self) -> usize {
        0
    }

    pub fn order_of(&self, i: usize) -> usize {
        self.masks[i].count_ones() as usize
    }

    pub fn subgroup(&self, i: usize) -> PermGroupTwoSort {
        let elements = (0..self.group.order())
            .filter(|&a| self.masks[i] >> a & 1 == 1)
            .map(|a| self.group.elements[a].clone())
            .collect();
        PermGroupTwoSort {
            n: self.group.n,
            m: self.group.m,
            elements,
        }
    }

    pub fn is_subgroup_of(&self, i: usize, j: usize) -> bool {
        self.masks[i] & self.masks[j] == self.masks[i]
    }

    /// `mu(V_i, V_j)`, zero unless `V_i <= V_j`.
    pub fn mobius(&self, i: usize, j: usize) -> i64 {
        self.mobius[i][j]
    }

    fn conjugate(&self, g: usize, mask: u64) -> u64 {
        let mut out = 0u64;
        for a in 0..self.group.order() {
            if mask >> a & 1 == 1 {
                out |= 1 << self.mul[self.mul[g][a]][self.inv[g]];
            }
        }
        out
    }

    pub fn normalizer_order(&self, i: usize) -> usize {
        (0..self.group.order())
            .filter(|&g| self.conjugate(g, self.masks[i]) == self.masks[i])
            .count()
    }

    /// Subgroups grouped into conjugacy classes, each class sorted.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let position: HashMap<u64, usize> = self
            .masks
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();
        let mut seen = vec![false; self.len()];
        let mut classes = Vec::new();
        for i in 0..self.len() {
            if seen[i] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.group.order())
                .map(|g| position[&self.conjugate(g, self.masks[i])])
                .collect();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    pub fn entries(&self) -> Vec<SubgroupLatticeEntry> {
        (0..self.len())
            .map(|i| SubgroupLatticeEntry {
                subgroup: self.subgroup(i),
                moebius: self.mobius(self.bottom(), i),
            })
            .collect()
    }
}

/// `Z_M = (1/|H|) sum_h prod x_i^{c_i(h)} prod y_j^{d_j(h)}`.
pub fn z_from_group(g: &PermGroupTwoSort, cap: u32) -> IndexSeries {
    let weight = Rational::new(BigInt::one(), BigInt::from(g.order()));
    IndexSeries::from_terms(
        g.sorts(),
        cap,
        g.elements.iter().map(|e| {
            (
                cycle_monomial(&cycle_type(&e.x), &cycle_type(&e.y)),
                weight.clone(),
            )
        }),
    )
}

/// `Gamma_M = (1/|H|) sum_{V <= H} mu({1}, V) prod x_i^{c_i(V)} prod y_j^{d_j(V)}`
/// with `c_i(V)`, `d_j(V)` the numbers of `V`-orbits of size `i` (resp. `j`).
pub fn gamma_from_group(
    g: &PermGroupTwoSort,
    cap: u32,
    bound: usize,
) -> Result<IndexSeries, GroupError> {
    let lattice = SubgroupLattice::new(g, bound)?;
    let weight = Rational::new(BigInt::one(), BigInt::from(g.order()));
    let mut out = IndexSeries::zero(g.sorts(), cap);
    for entry in lattice.entries() {
        if entry.moebius == 0 {
            continue;
        }
        let (xc, yc) = entry.subgroup.orbit_counts();
        out.add_term(
            cycle_monomial(&xc, &yc),
            &weight * Rational::from_integer(entry.moebius.into()),
        );
    }
    Ok(out)
}

/// Species with known index series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinSpecies {
    E2,
    E3,
    C3,
    L2,
    Xpow(u32),
    P4bic,
    P6bic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKind {
    Z,
    Gamma,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn mono(pairs: &[(Var, u32)]) -> Monomial {
    Monomial::from_pairs(pairs)
}

/// Closed-form index series of the builtin species.
pub fn builtin(species: BuiltinSpecies, kind: IndexKind, cap: u32) -> IndexSeries {
    use IndexKind::*;
    use Var::{X, Y};
    let one_sort =
        |terms: Vec<(Monomial, Rational)>| IndexSeries::from_terms(Sorts::One, cap, terms);
    let two_sort =
        |terms: Vec<(Monomial, Rational)>| IndexSeries::from_terms(Sorts::Two, cap, terms);
    match (species, kind) {
        (BuiltinSpecies::E2, Z) => one_sort(vec![
            (mono(&[(X(1), 2)]), q(1, 2)),
            (mono(&[(X(2), 1)]), q(1, 2)),
        ]),
        (BuiltinSpecies::E2, Gamma) => one_sort(vec![
            (mono(&[(X(1), 2)]), q(1, 2)),
            (mono(&[(X(2), 1)]), q(-1, 2)),
        ]),
        (BuiltinSpecies::C3, Z) => one_sort(vec![
            (mono(&[(X(1), 3)]), q(1, 3)),
            (mono(&[(X(3), 1)]), q(2, 3)),
        ]),
        (BuiltinSpecies::C3, Gamma) => one_sort(vec![
            (mono(&[(X(1), 3)]), q(1, 3)),
            (mono(&[(X(3), 1)]), q(-1, 3)),
        ]),
        (BuiltinSpecies::E3, Z) => one_sort(vec![
            (mono(&[(X(1), 3)]), q(1, 6)),
            (mono(&[(X(1), 1), (X(2), 1)]), q(1, 2)),
            (mono(&[(X(3), 1)]), q(1, 3)),
        ]),
        (BuiltinSpecies::E3, Gamma) => {
            gamma_from_group(&PermGroupTwoSort::symmetric(3), cap, DEFAULT_SUBGROUP_BOUND)
                .expect("S3 is small")
        }
        (BuiltinSpecies::L2, _) => one_sort(vec![(mono(&[(X(1), 2)]), q(1, 1))]),
        (BuiltinSpecies::Xpow(n), _) => one_sort(vec![(mono(&[(X(1), n)]), q(1, 1))]),
        (BuiltinSpecies::P4bic, Z) => two_sort(vec![
            (mono(&[(X(1), 2), (Y(1), 4)]), q(1, 4)),
            (mono(&[(X(2), 1), (Y(2), 2)]), q(2, 4)),
            (mono(&[(X(1), 2), (Y(2), 2)]), q(1, 4)),
        ]),
        (BuiltinSpecies::P4bic, Gamma) => two_sort(vec![
            (mono(&[(X(1), 2), (Y(1), 4)]), q(1, 4)),
            (mono(&[(X(1), 2), (Y(2), 2)]), q(-1, 4)),
            (mono(&[(X(2), 1), (Y(2), 2)]), q(-2, 4)),
            (mono(&[(X(2), 1), (Y(4), 1)]), q(2, 4)),
        ]),
        (BuiltinSpecies::P6bic, Z) => two_sort(vec![
            (mono(&[(X(1), 3), (Y(1), 6)]), q(1, 6)),
            (mono(&[(X(3), 1), (Y(3), 2)]), q(2, 6)),
            (mono(&[(X(1), 1), (X(2), 1), (Y(2), 3)]), q(3, 6)),
        ]),
        (BuiltinSpecies::P6bic, Gamma) => two_sort(vec![
            (mono(&[(X(1), 3), (Y(1), 6)]), q(1, 6)),
            (mono(&[(X(3), 1), (Y(3), 2)]), q(-1, 6)),
            (mono(&[(X(1), 1), (X(2), 1), (Y(2), 3)]), q(-3, 6)),
            (mono(&[(X(3), 1), (Y(6), 1)]), q(3, 6)),
        ]),
    }
}

/// Outer species for [`gamma_compose_nonzero_const`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outer {
    E2,
    C3,
}

/// `Gamma_{E2(G)}` or `Gamma_{C3(G)}` for a species `G` with `G(0) = g0`,
/// which need not vanish.
pub fn gamma_compose_nonzero_const(
    outer: Outer,
    g_gamma: &IndexSeries,
    g0: &Rational,
) -> IndexSeries {
    let (k, s) = match outer {
        Outer::E2 => (2u32, q(1, 2)),
        Outer::C3 => (3u32, q(1, 3)),
    };
    let inner = &g_gamma.pow(k) - &g_gamma.adams(k);
    &IndexSeries::constant(g_gamma.sorts(), g_gamma.cap(), g0.clone()) + &inner.scale(&s)
}

/// Molecular species occurring in `M(X, b0 + Y)` for `M = X^n Y^m / H`,
/// where `b0` counts distinct empty structures: one group per `H`-orbit of
/// fillings of the Y-slots, restricted to the X-points and the slots that
/// still carry a Y-point.
pub fn constant_split(g: &PermGroupTwoSort, b0: usize) -> Vec<PermGroupTwoSort> {
    let m = g.m;
    let colours = b0 + 1;
    let star = b0;
    let total = colours.pow(m as u32);
    let decode = |mut code: usize| -> Vec<usize> {
        let mut f = vec![0; m];
        for slot in f.iter_mut() {
            *slot = code % colours;
            code /= colours;
        }
        f
    };
    let encode = |f: &[usize]| -> usize { f.iter().rev().fold(0, |acc, &c| acc * colours + c) };
    let mut seen = vec![false; total];
    let mut out = Vec::new();
    for code in 0..total {
        if seen[code] {
            continue;
        }
        let f = decode(code);
        let mut stabilizer: BTreeSet<TwoSortPerm> = BTreeSet::new();
        for h in &g.elements {
            // (h . f)(h(j)) = f(j)
            let mut image = vec![0; m];
            for j in 0..m {
                image[h.y[j]] = f[j];
            }
            seen[encode(&image)] = true;
            if image == f {
                let starred: Vec<usize> = (0..m).filter(|&j| f[j] == star).collect();
                let relabel: BTreeMap<usize, usize> = starred
                    .iter()
                    .enumerate()
                    .map(|(new, &old)| (old, new))
                    .collect();
                let y: Perm = starred.iter().map(|j| relabel[&h.y[*j]]).collect();
                stabilizer.insert(TwoSortPerm::new(h.x.clone(), y));
            }
        }
        let s = f.iter().filter(|&&c| c == star).count();
        out.push(
            PermGroupTwoSort::new(g.n, s, stabilizer.into_iter().collect())
                .expect("restricted stabilizer is a group"),
        );
    }
    out
}

/// Index series of `M(X, B)` for an asymmetric species `B` with
/// `B(0) = b0`, given the index series `b_plus` of `B - b0` (one-sort, zero
/// constant term). Valid for `Gamma` even when `b0 != 0`, since `b0` is
/// first split off into molecular pieces.
pub fn index_of_substitution(
    g: &PermGroupTwoSort,
    kind: IndexKind,
    b0: usize,
    b_plus: &IndexSeries,
    bound: usize,
) -> Result<IndexSeries, GroupError> {
    if !b_plus.constant_term().is_zero() {
        return Err(GroupError::NonzeroConstant);
    }
    let cap = b_plus.cap();
    let x = IndexSeries::var(Sorts::One, cap, Var::X(1));
    let mut out = IndexSeries::zero(Sorts::One, cap);
    for piece in constant_split(g, b0) {
        let series = match kind {
            IndexKind::Z => z_from_group(&piece, cap),
            IndexKind::Gamma => gamma_from_group(&piece, cap, bound)?,
        };
        out = &out + &series.substitute(&x, Some(b_plus))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u32 = 30;

    #[test]
    fn closure_is_checked() {
        let h = TwoSortPerm::new(from_cycles(2, &[&[0, 1]]), identity(0));
        assert_eq!(
            PermGroupTwoSort::new(2, 0, vec![h.clone()]),
            Err(GroupError::MissingIdentity)
        );
        let c3 = TwoSortPerm::new(from_cycles(3, &[&[0, 1, 2]]), vec![]);
        assert_eq!(
            PermGroupTwoSort::new(3, 0, vec![TwoSortPerm::identity(3, 0), c3]),
            Err(GroupError::NotClosed)
        );
        assert_eq!(PermGroupTwoSort::p4bic().order(), 4);
        assert_eq!(PermGroupTwoSort::p6bic().order(), 6);
        assert_eq!(PermGroupTwoSort::symmetric(4).order(), 24);
    }

    #[test]
    fn z_of_bicoloured_polygons() {
        assert_eq!(
            z_from_group(&PermGroupTwoSort::p4bic(), CAP),
            builtin(BuiltinSpecies::P4bic, IndexKind::Z, CAP)
        );
        assert_eq!(
            z_from_group(&PermGroupTwoSort::p6bic(), CAP),
            builtin(BuiltinSpecies::P6bic, IndexKind::Z, CAP)
        );
        let t = z_from_group(&PermGroupTwoSort::trivial(2, 0), CAP);
        assert_eq!(t, builtin(BuiltinSpecies::Xpow(2), IndexKind::Z, CAP));
    }

    #[test]
    fn gamma_of_bicoloured_polygons() {
        let b = DEFAULT_SUBGROUP_BOUND;
        assert_eq!(
            gamma_from_group(&PermGroupTwoSort::p4bic(), CAP, b).unwrap(),
            builtin(BuiltinSpecies::P4bic, IndexKind::Gamma, CAP)
        );
        assert_eq!(
            gamma_from_group(&PermGroupTwoSort::p6bic(), CAP, b).unwrap(),
            builtin(BuiltinSpecies::P6bic, IndexKind::Gamma, CAP)
        );
        let t = gamma_from_group(&PermGroupTwoSort::trivial(1, 0), CAP, b).unwrap();
        assert_eq!(t, IndexSeries::var(Sorts::One, CAP, Var::X(1)));
    }

    #[test]
    fn small_one_sort_groups() {
        let b = DEFAULT_SUBGROUP_BOUND;
        let s2 = PermGroupTwoSort::symmetric(2);
        assert_eq!(
            z_from_group(&s2, CAP),
            builtin(BuiltinSpecies::E2, IndexKind::Z, CAP)
        );
        assert_eq!(
            gamma_from_group(&s2, CAP, b).unwrap(),
            builtin(BuiltinSpecies::E2, IndexKind::Gamma, CAP)
        );
        let c3 = PermGroupTwoSort::cyclic(3);
        assert_eq!(
            z_from_group(&c3, CAP),
            builtin(BuiltinSpecies::C3, IndexKind::Z, CAP)
        );
        assert_eq!(
            gamma_from_group(&c3, CAP, b).unwrap(),
            builtin(BuiltinSpecies::C3, IndexKind::Gamma, CAP)
        );
        let s3 = PermGroupTwoSort::symmetric(3);
        assert_eq!(
            z_from_group(&s3, CAP),
            builtin(BuiltinSpecies::E3, IndexKind::Z, CAP)
        );
    }

    #[test]
    fn too_large_groups_are_refused() {
        let s5 = PermGroupTwoSort::symmetric(5);
        assert_eq!(
            gamma_from_group(&s5, CAP, DEFAULT_SUBGROUP_BOUND),
            Err(GroupError::TooLarge {
                order: 120,
                bound: 24
            })
        );
    }

    #[test]
    fn mobius_sums_vanish_above_bottom() {
        for g in [
            PermGroupTwoSort::p4bic(),
            PermGroupTwoSort::p6bic(),
            PermGroupTwoSort::symmetric(4),
            PermGroupTwoSort::cyclic(6),
        ] {
            let lat = SubgroupLattice::new(&g, DEFAULT_SUBGROUP_BOUND).unwrap();
            for v in 0..lat.len() {
                let s: i64 = (0..lat.len())
                    .filter(|&w| lat.is_subgroup_of(w, v))
                    .map(|w| lat.mobius(lat.bottom(), w))
                    .sum();
                assert_eq!(s, i64::from(v == lat.bottom()));
            }
        }
        // S4 has 30 subgroups in 11 conjugacy classes.
        let lat = SubgroupLattice::new(&PermGroupTwoSort::symmetric(4), 24).unwrap();
        assert_eq!(lat.len(), 30);
        assert_eq!(lat.conjugacy_classes().len(), 11);
    }

    #[test]
    fn gamma_composition_with_constant() {
        let x = IndexSeries::var(Sorts::One, CAP, Var::X(1));
        let one = IndexSeries::one(Sorts::One, CAP);
        let g = &one + &x;
        let e2 = gamma_compose_nonzero_const(Outer::E2, &g, &q(1, 1));
        let expected = &g + &builtin(BuiltinSpecies::E2, IndexKind::Gamma, CAP);
        assert_eq!(e2, expected);
        let c3 = gamma_compose_nonzero_const(Outer::C3, &g, &q(1, 1));
        let expected = &(&g + &(&x * &x)) + &builtin(BuiltinSpecies::C3, IndexKind::Gamma, CAP);
        assert_eq!(c3, expected);
        // g0 = 0 reduces to plethysm.
        let x2 = &x * &x;
        let gg = &x + &x2;
        let lhs = gamma_compose_nonzero_const(Outer::E2, &gg, &q(0, 1));
        let rhs = builtin(BuiltinSpecies::E2, IndexKind::Gamma, CAP)
            .plethysm(&gg)
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_split_of_e2_and_c3() {
        let e2 = constant_split(&PermGroupTwoSort::symmetric(2).swap_sorts(), 1);
        let orders: Vec<(usize, usize)> = e2.iter().map(|g| (g.m(), g.order())).collect();
        assert_eq!(orders, vec![(0, 1), (1, 1), (2, 2)]);
        let c3 = constant_split(&PermGroupTwoSort::cyclic(3).swap_sorts(), 1);
        let mut orders: Vec<(usize, usize)> = c3.iter().map(|g| (g.m(), g.order())).collect();
        orders.sort();
        assert_eq!(orders, vec![(0, 1), (1, 1), (2, 1), (3, 3)]);
    }

    #[test]
    fn substitution_route_matches_special_gamma_formula() {
        let x = IndexSeries::var(Sorts::One, 12, Var::X(1));
        let bplus = &x + &(&x * &x);
        let one = IndexSeries::one(Sorts::One, 12);
        let b = &one + &bplus;
        for (outer, group) in [
            (Outer::E2, PermGroupTwoSort::symmetric(2).swap_sorts()),
            (Outer::C3, PermGroupTwoSort::cyclic(3).swap_sorts()),
        ] {
            let lhs = index_of_substitution(&group, IndexKind::Gamma, 1, &bplus, 24).unwrap();
            let rhs = gamma_compose_nonzero_const(outer, &b, &q(1, 1));
            assert_eq!(lhs, rhs);
            // For Z the plain plethysm is valid even with a constant term.
            let z = index_of_substitution(&group, IndexKind::Z, 1, &bplus, 24).unwrap();
            let sp = match outer {
                Outer::E2 => BuiltinSpecies::E2,
                Outer::C3 => BuiltinSpecies::C3,
            };
            assert_eq!(z, builtin(sp, IndexKind::Z, 12).plethysm(&b).unwrap());
        }
    }
}
