//! Brute-force ground truth from triangulations of convex polygons.
//!
//! A 2-tree with `n` triangles whose internal faces are all triangles is a
//! triangulation of the `(n + 2)`-gon. Plane structures are orbits under
//! rotations, planar ones under the full dihedral group. Everything here is
//! computed by exhaustive enumeration and does not depend on the formula
//! modules; only the tag classifier is shared.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::kind::{Pointing, SymmetryGroup};
use crate::molecular::{classify_action, factorial, MolecularExpansion, MolecularTag};
use crate::species_index::{cycle_type, Perm};

/// Default bound on the number of triangles.
pub const DEFAULT_ORACLE_MAX: usize = 12;
/// Largest size supported by the 128-bit diagonal masks.
pub const HARD_ORACLE_MAX: usize = 14;
/// Environment variable overriding [`DEFAULT_ORACLE_MAX`].
pub const ORACLE_MAX_ENV: &str = "TWOTREES_ORACLE_MAX";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle size {n} outside the configured range 0..={max}")]
    OutOfRange { n: usize, max: usize },
    #[error("invalid value `{0}` for the oracle size bound")]
    BadBound(String),
}

/// The configured bound: [`ORACLE_MAX_ENV`] if set, else the default, and
/// never more than [`HARD_ORACLE_MAX`].
pub fn oracle_max() -> Result<usize, OracleError> {
    match std::env::var(ORACLE_MAX_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(m) if m <= HARD_ORACLE_MAX => Ok(m),
            _ => Err(OracleError::BadBound(v)),
        },
        Err(_) => Ok(DEFAULT_ORACLE_MAX),
    }
}

fn check_range(n: usize) -> Result<(), OracleError> {
    let max = oracle_max()?;
    if n > max {
        return Err(OracleError::OutOfRange { n, max });
    }
    Ok(())
}

/// Vertex pairs of a `p`-gon ranked in lexicographic order. Pair of rank
/// `r` is stored at bit `127 - r`, so that comparing masks as integers
/// compares sorted diagonal lists lexicographically (reversed).
#[derive(Debug)]
struct Polygon {
    p: usize,
    rank: Vec<Vec<u32>>,
    pairs: Vec<(usize, usize)>,
    /// Vertex maps of the group elements; rotations first.
    maps: Vec<Perm>,
    /// For each group element, the induced map on pair ranks.
    rank_maps: Vec<Vec<u32>>,
}

impl Polygon {
    fn new(p: usize, group: SymmetryGroup) -> Self {
        let mut rank = vec![vec![u32::MAX; p]; p];
        let mut pairs = Vec::new();
        for i in 0..p {
            for j in i + 1..p {
                rank[i][j] = pairs.len() as u32;
                rank[j][i] = pairs.len() as u32;
                pairs.push((i, j));
            }
        }
        let mut maps: Vec<Perm> = (0..p)
            .map(|r| (0..p).map(|i| (i + r) % p).collect())
            .collect();
        if group == SymmetryGroup::Dihedral {
            maps.extend((0..p).map(|c| (0..p).map(|i| (c + p - i) % p).collect::<Perm>()));
        }
        let rank_maps = maps
            .iter()
            .map(|g| pairs.iter().map(|&(a, b)| rank[g[a]][g[b]]).collect())
            .collect();
        Polygon {
            p,
            rank,
            pairs,
            maps,
            rank_maps,
        }
    }

    fn bit(&self, a: usize, b: usize) -> u128 {
        1u128 << (127 - self.rank[a][b])
    }

    fn apply(&self, g: usize, mask: u128) -> u128 {
        let table = &self.rank_maps[g];
        let mut m = mask;
        let mut out = 0u128;
        while m != 0 {
            let r = m.leading_zeros();
            m &= !(1u128 << (127 - r));
            out |= 1u128 << (127 - table[r as usize]);
        }
        out
    }

    fn diagonals(&self, mask: u128) -> Vec<(usize, usize)> {
        let mut m = mask;
        let mut out = Vec::new();
        while m != 0 {
            let r = m.leading_zeros();
            m &= !(1u128 << (127 - r));
            out.push(self.pairs[r as usize]);
        }
        out
    }

    /// All triangulations of the chain `lo..=hi` closed by the base `(lo, hi)`:
    /// pick the apex of the triangle on the base, recurse on both sides.
    fn triangulate(
        &self,
        lo: usize,
        hi: usize,
        memo: &mut HashMap<(usize, usize), Vec<u128>>,
    ) -> Vec<u128> {
        if hi - lo < 2 {
            return vec![0];
        }
        if let Some(v) = memo.get(&(lo, hi)) {
            return v.clone();
        }
        let mut out = Vec::new();
        for apex in lo + 1..hi {
            let left = self.triangulate(lo, apex, memo);
            let right = self.triangulate(apex, hi, memo);
            let mut extra = 0u128;
            if apex - lo >= 2 {
                extra |= self.bit(lo, apex);
            }
            if hi - apex >= 2 {
                extra |= self.bit(apex, hi);
            }
            for l in &left {
                for r in &right {
                    out.push(l | r | extra);
                }
            }
        }
        memo.insert((lo, hi), out.clone());
        out
    }
}

/// A full triangulation of a convex polygon, as its set of diagonals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    polygon_size: usize,
    diagonals: Vec<(usize, usize)>,
}

impl Triangulation {
    pub fn polygon_size(&self) -> usize {
        self.polygon_size
    }

    pub fn diagonals(&self) -> &[(usize, usize)] {
        &self.diagonals
    }

    pub fn triangle_count(&self) -> usize {
        self.polygon_size.saturating_sub(2)
    }

    /// Diagonals pairwise non-crossing and exactly `p - 3` of them.
    pub fn is_valid(&self) -> bool {
        let p = self.polygon_size;
        if p < 3 {
            return self.diagonals.is_empty();
        }
        let crosses = |(a, b): (usize, usize), (c, d): (usize, usize)| {
            (a < c && c < b && b < d) || (c < a && a < d && d < b)
        };
        self.diagonals.len() == p - 3
            && self
                .diagonals
                .iter()
                .all(|&(a, b)| a < b && b - a >= 2 && !(a == 0 && b == p - 1))
            && self
                .diagonals
                .iter()
                .enumerate()
                .all(|(i, &x)| self.diagonals[i + 1..].iter().all(|&y| !crosses(x, y)))
    }

    /// Triangles as sorted vertex triples, sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let p = self.polygon_size;
        if p < 3 {
            return vec![];
        }
        let mut adj = vec![vec![false; p]; p];
        for i in 0..p {
            let j = (i + 1) % p;
            adj[i][j] = true;
            adj[j][i] = true;
        }
        for &(a, b) in &self.diagonals {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        let mut out = Vec::new();
        for a in 0..p {
            for b in a + 1..p {
                if !adj[a][b] {
                    continue;
                }
                for c in b + 1..p {
                    if adj[a][c] && adj[b][c] {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }
}

fn all_masks(n: usize) -> (Polygon, Vec<u128>) {
    let p = n + 2;
    let poly = Polygon::new(p, SymmetryGroup::Cyclic);
    let masks = if n == 0 {
        vec![0]
    } else {
        poly.triangulate(0, p - 1, &mut HashMap::new())
    };
    (poly, masks)
}

/// Every triangulation of the `(n + 2)`-gon, each exactly once.
pub fn gen_rooted(n: usize) -> Result<Vec<Triangulation>, OracleError> {
    check_range(n)?;
    let (poly, masks) = all_masks(n);
    Ok(masks
        .into_iter()
        .map(|m| Triangulation {
            polygon_size: poly.p,
            diagonals: poly.diagonals(m),
        })
        .collect())
}

/// One orbit of triangulations under the polygon group.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    /// Representative: the lexicographically least sorted diagonal list.
    pub canonical: Triangulation,
    pub orbit_size: usize,
    /// Order of the subgroup of polygon symmetries fixing the triangulation.
    pub stabilizer_order: usize,
    /// Order of the automorphism group acting on the triangles, i.e. the
    /// image of the stabilizer. Smaller than `stabilizer_order` only when
    /// some symmetry fixes every triangle (`n <= 2`).
    pub aut_order: usize,
    /// Cycle types of the automorphisms on the triangles, sorted.
    pub aut_cycle_types: Vec<Vec<u32>>,
    pub molecular_tag: Option<MolecularTag>,
    stabilizer: Vec<Perm>,
    triangles: Vec<[usize; 3]>,
    triangle_perms: Vec<Perm>,
}

impl OrbitRecord {
    fn new(poly: &Polygon, mask: u128, stab: Vec<usize>, group_order: usize) -> Self {
        let canonical = Triangulation {
            polygon_size: poly.p,
            diagonals: poly.diagonals(mask),
        };
        let triangles = canonical.triangles();
        let index: HashMap<[usize; 3], usize> =
            triangles.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let stabilizer: Vec<Perm> = stab.iter().map(|&g| poly.maps[g].clone()).collect();
        let triangle_perms: Vec<Perm> = stabilizer
            .iter()
            .map(|g| {
                triangles
                    .iter()
                    .map(|t| {
                        let mut img = [g[t[0]], g[t[1]], g[t[2]]];
                        img.sort_unstable();
                        index[&img]
                    })
                    .collect()
            })
            .collect();
        let image: BTreeSet<Perm> = triangle_perms.iter().cloned().collect();
        let image: Vec<Perm> = image.into_iter().collect();
        let mut aut_cycle_types: Vec<Vec<u32>> = image.iter().map(cycle_type).collect();
        aut_cycle_types.sort();
        OrbitRecord {
            orbit_size: group_order / stab.len(),
            stabilizer_order: stab.len(),
            aut_order: image.len(),
            aut_cycle_types,
            molecular_tag: classify_action(triangles.len(), &image),
            canonical,
            stabilizer,
            triangles,
            triangle_perms,
        }
    }

    fn single_edge() -> Self {
        OrbitRecord {
            canonical: Triangulation {
                polygon_size: 2,
                diagonals: vec![],
            },
            orbit_size: 1,
            stabilizer_order: 1,
            aut_order: 1,
            aut_cycle_types: vec![vec![]],
            molecular_tag: Some(MolecularTag::One),
            stabilizer: vec![vec![0, 1]],
            triangles: vec![],
            triangle_perms: vec![vec![]],
        }
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn to_json(&self) -> Value {
        json!({
            "polygon_size": self.canonical.polygon_size,
            "diagonals": self.canonical.diagonals,
            "orbit_size": self.orbit_size,
            "stabilizer_order": self.stabilizer_order,
            "aut_order": self.aut_order,
            "aut_cycle_types": self.aut_cycle_types,
            "molecular_tag": self.molecular_tag.map(|t| t.to_string()).unwrap_or_else(|| "unclassified".into()),
        })
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let p = self.canonical.polygon_size;
        let mut set: BTreeSet<(usize, usize)> = (0..p)
            .map(|i| {
                let j = (i + 1) % p;
                (i.min(j), i.max(j))
            })
            .collect();
        set.extend(self.canonical.diagonals.iter().copied());
        set.into_iter().collect()
    }

    /// The pointed elements of this triangulation, each as (triangle, edge).
    fn items(&self, pointing: Pointing) -> Vec<Item> {
        match pointing {
            Pointing::None => vec![Item::Whole],
            Pointing::Edge => self.edges().into_iter().map(Item::Edge).collect(),
            Pointing::Triangle => (0..self.triangles.len()).map(Item::Triangle).collect(),
            Pointing::TriangleEdge => self
                .triangles
                .iter()
                .enumerate()
                .flat_map(|(i, t)| {
                    [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
                        .into_iter()
                        .map(move |e| Item::Flag(i, e))
                })
                .collect(),
        }
    }

    fn act(&self, g: usize, item: Item) -> Item {
        let v = &self.stabilizer[g];
        let edge = |(a, b): (usize, usize)| (v[a].min(v[b]), v[a].max(v[b]));
        match item {
            Item::Whole => Item::Whole,
            Item::Edge(e) => Item::Edge(edge(e)),
            Item::Triangle(t) => Item::Triangle(self.triangle_perms[g][t]),
            Item::Flag(t, e) => Item::Flag(self.triangle_perms[g][t], edge(e)),
        }
    }

    /// Pointed structures arising from this triangulation: one per orbit of
    /// the stabilizer on the pointed elements, with the automorphism group
    /// of the pointed structure acting on the triangles.
    pub fn pointed(&self, pointing: Pointing) -> Vec<PointedRecord> {
        let items = self.items(pointing);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for item in items {
            if seen.contains(&item) {
                continue;
            }
            let mut fixing = Vec::new();
            for g in 0..self.stabilizer.len() {
                let img = self.act(g, item);
                seen.insert(img);
                if img == item {
                    fixing.push(g);
                }
            }
            let image: BTreeSet<Perm> = fixing
                .iter()
                .map(|&g| self.triangle_perms[g].clone())
                .collect();
            let image: Vec<Perm> = image.into_iter().collect();
            out.push(PointedRecord {
                pair_stabilizer_order: fixing.len(),
                aut_order: image.len(),
                molecular_tag: classify_action(self.triangles.len(), &image),
            });
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Item {
    Whole,
    Edge((usize, usize)),
    Triangle(usize),
    Flag(usize, (usize, usize)),
}

/// One isomorphism class of pointed structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedRecord {
    /// Polygon symmetries fixing both the triangulation and the point.
    pub pair_stabilizer_order: usize,
    pub aut_order: usize,
    pub molecular_tag: Option<MolecularTag>,
}

type CacheKey = (usize, SymmetryGroup);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Vec<OrbitRecord>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Vec<OrbitRecord>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Orbits of the triangulations of the `(n + 2)`-gon, sorted by canonical
/// form. `n = 0` is the single edge.
pub fn orbits(n: usize, group: SymmetryGroup) -> Result<Arc<Vec<OrbitRecord>>, OracleError> {
    check_range(n)?;
    if let Some(hit) = cache().lock().expect("oracle cache").get(&(n, group)) {
        return Ok(hit.clone());
    }
    let records = if n == 0 {
        vec![OrbitRecord::single_edge()]
    } else {
        let (_, masks) = all_masks(n);
        let poly = Polygon::new(n + 2, group);
        let order = poly.maps.len();
        let mut reps: Vec<(u128, Vec<usize>)> = masks
            .par_iter()
            .filter_map(|&m| {
                let mut stab = Vec::new();
                for g in 0..order {
                    let img = poly.apply(g, m);
                    if img > m {
                        return None;
                    }
                    if img == m {
                        stab.push(g);
                    }
                }
                Some((m, stab))
            })
            .collect();
        reps.sort_by_key(|r| std::cmp::Reverse(r.0));
        reps.into_par_iter()
            .map(|(m, stab)| OrbitRecord::new(&poly, m, stab, order))
            .collect()
    };
    let records = Arc::new(records);
    cache()
        .lock()
        .expect("oracle cache")
        .insert((n, group), records.clone());
    Ok(records)
}

/// Number of orbits by Burnside's lemma, averaging fixed triangulations
/// over the group, without finding any orbit.
pub fn burnside_count(n: usize, group: SymmetryGroup) -> Result<u64, OracleError> {
    check_range(n)?;
    if n == 0 {
        return Ok(1);
    }
    let (_, masks) = all_masks(n);
    let poly = Polygon::new(n + 2, group);
    let order = poly.maps.len();
    let fixed: u64 = masks
        .par_iter()
        .map(|&m| (0..order).filter(|&g| poly.apply(g, m) == m).count() as u64)
        .sum();
    Ok(fixed / order as u64)
}

/// Orbits of triangulations with a distinguished oriented polygon side.
/// The group acts freely, so this recovers the number of rooted structures.
pub fn external_edge_count(n: usize, group: SymmetryGroup) -> Result<u64, OracleError> {
    check_range(n)?;
    if n == 0 {
        return Ok(1);
    }
    let recs = orbits(n, group)?;
    let mut total = 0u64;
    for rec in recs.iter() {
        let p = rec.canonical.polygon_size;
        let mut seen = BTreeSet::new();
        for i in 0..p {
            for side in [(i, (i + 1) % p), ((i + 1) % p, i)] {
                if group == SymmetryGroup::Cyclic && side.1 != (side.0 + 1) % p {
                    continue;
                }
                if seen.contains(&side) {
                    continue;
                }
                total += 1;
                for g in &rec.stabilizer {
                    seen.insert((g[side.0], g[side.1]));
                }
            }
        }
    }
    Ok(total)
}

/// Aggregated counts of one size, group and pointing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCounts {
    pub n: usize,
    pub group: SymmetryGroup,
    pub pointing: Pointing,
    pub unlabelled: u64,
    /// `sum n! / aut_order`.
    pub labelled: BigInt,
    /// Structures with trivial automorphism group.
    pub asymmetric: u64,
    /// Structures by automorphism group order.
    pub by_stab_order: BTreeMap<usize, u64>,
    /// Structures by order of the polygon symmetry group fixing them.
    pub by_polygon_stab_order: BTreeMap<usize, u64>,
    pub by_tag: BTreeMap<MolecularTag, u64>,
    pub unclassified: u64,
}

impl OracleCounts {
    /// The degree-`n` part of a molecular expansion, as seen by the oracle.
    pub fn expansion(&self) -> MolecularExpansion {
        let mut out = MolecularExpansion::new(self.n as u32);
        for (t, c) in &self.by_tag {
            out.add_term(*t, BigInt::from(*c)).expect("nonnegative");
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let by_tag: BTreeMap<String, u64> = self
            .by_tag
            .iter()
            .map(|(t, c)| (t.to_string(), *c))
            .collect();
        json!({
            "n": self.n,
            "group": self.group.as_str(),
            "pointing": self.pointing.as_str(),
            "unlabelled": self.unlabelled,
            "labelled": self.labelled.to_string(),
            "asymmetric": self.asymmetric,
            "by_stab_order": self.by_stab_order,
            "by_polygon_stab_order": self.by_polygon_stab_order,
            "by_tag": by_tag,
            "unclassified": self.unclassified,
        })
    }
}

pub fn oracle_counts(
    n: usize,
    group: SymmetryGroup,
    pointing: Pointing,
) -> Result<OracleCounts, OracleError> {
    let recs = orbits(n, group)?;
    let fact = factorial(n as u32);
    let mut out = OracleCounts {
        n,
        group,
        pointing,
        unlabelled: 0,
        labelled: BigInt::from(0),
        asymmetric: 0,
        by_stab_order: BTreeMap::new(),
        by_polygon_stab_order: BTreeMap::new(),
        by_tag: BTreeMap::new(),
        unclassified: 0,
    };
    for rec in recs.iter() {
        for pr in rec.pointed(pointing) {
            out.unlabelled += 1;
            out.labelled += &fact / BigInt::from(pr.aut_order);
            if pr.aut_order == 1 {
                out.asymmetric += 1;
            }
            *out.by_stab_order.entry(pr.aut_order).or_default() += 1;
            *out.by_polygon_stab_order
                .entry(pr.pair_stabilizer_order)
                .or_default() += 1;
            match pr.molecular_tag {
                Some(t) => *out.by_tag.entry(t.canonical()).or_default() += 1,
                None => out.unclassified += 1,
            }
        }
    }
    Ok(out)
}
