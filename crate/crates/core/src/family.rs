//! Ground sets, k-uniform families stored as sorted bitmasks, the basic
//! predicates on them, and embedding / isomorphism testing.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_GROUND: usize = 64;

/// A subset of the ground set `0..n`, one bit per element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgeMask(pub u64);

/// Element sets (exclusion sets, windows) share the edge representation.
pub type ElementSet = EdgeMask;

impl EdgeMask {
    pub const EMPTY: EdgeMask = EdgeMask(0);

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> EdgeMask {
        EdgeMask(elements.into_iter().fold(0u64, |m, e| m | (1u64 << e)))
    }

    /// The first `count` elements `0..count`.
    pub fn prefix(count: usize) -> EdgeMask {
        if count >= 64 {
            EdgeMask(u64::MAX)
        } else {
            EdgeMask((1u64 << count) - 1)
        }
    }

    pub fn singleton(e: usize) -> EdgeMask {
        EdgeMask(1u64 << e)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    #[inline]
    pub fn meets(self, other: EdgeMask) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn intersection(self, other: EdgeMask) -> EdgeMask {
        EdgeMask(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: EdgeMask) -> EdgeMask {
        EdgeMask(self.0 | other.0)
    }

    #[inline]
    pub fn difference(self, other: EdgeMask) -> EdgeMask {
        EdgeMask(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: EdgeMask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn with(self, e: usize) -> EdgeMask {
        EdgeMask(self.0 | 1u64 << e)
    }

    #[inline]
    pub fn without(self, e: usize) -> EdgeMask {
        EdgeMask(self.0 & !(1u64 << e))
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Sum of the element labels; the shifting potential of a single edge.
    pub fn element_sum(self) -> u64 {
        self.elements().map(|e| e as u64).sum()
    }

    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.elements().collect()
    }
}

impl fmt::Display for EdgeMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Serialized as the ascending list of elements.
impl Serialize for EdgeMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeMask {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<EdgeMask, D::Error> {
        let list = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = list.iter().find(|&&e| e >= MAX_GROUND) {
            return Err(serde::de::Error::custom(format!("element {bad} is outside 0..64")));
        }
        Ok(EdgeMask::from_elements(list))
    }
}

/// Ascending iterator over the elements of a mask.
#[derive(Debug, Clone)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

/// All `k`-subsets of `within`, in increasing mask order.
pub fn subsets_of(within: EdgeMask, k: usize) -> impl Iterator<Item = EdgeMask> {
    let universe: Vec<usize> = within.to_vec();
    let m = universe.len();
    KSubsets::new(m, k).map(move |local| {
        EdgeMask::from_elements(local.elements().map(|i| universe[i]))
    })
}

/// All `k`-subsets of `0..n` in increasing mask order (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    KSubsets::new(n, k)
}

#[derive(Debug, Clone)]
pub struct KSubsets {
    next: Option<u64>,
    limit_bit: u32,
}

impl KSubsets {
    fn new(n: usize, k: usize) -> KSubsets {
        assert!(n <= MAX_GROUND);
        let next = if k > n {
            None
        } else if k == 0 {
            Some(0)
        } else {
            Some(EdgeMask::prefix(k).0)
        };
        KSubsets { next, limit_bit: n as u32 }
    }
}

impl Iterator for KSubsets {
    type Item = EdgeMask;

    fn next(&mut self) -> Option<EdgeMask> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                if self.limit_bit < 64 && nxt >> self.limit_bit != 0 {
                    None
                } else {
                    Some(nxt)
                }
            }
        };
        Some(EdgeMask(cur))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<GroundSet> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSize(n));
        }
        Ok(GroundSet { n })
    }

    pub fn size(self) -> usize {
        self.n
    }

    pub fn all(self) -> ElementSet {
        EdgeMask::prefix(self.n)
    }

    pub fn contains_set(self, set: EdgeMask) -> bool {
        set.is_subset_of(self.all())
    }
}

/// A `k`-uniform family over `0..n`, edges kept strictly sorted by mask value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "FamilyJson", try_from = "FamilyJson")]
pub struct SetFamily {
    ground: GroundSet,
    k: usize,
    edges: Vec<EdgeMask>,
}

impl SetFamily {
    /// Validates every edge and rejects duplicates; input order is irrelevant.
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = EdgeMask>) -> Result<SetFamily> {
        let ground = GroundSet::new(n)?;
        if k == 0 || k > n {
            return Err(Error::Uniformity { n, k });
        }
        let mut edges: Vec<EdgeMask> = edges.into_iter().collect();
        for &e in &edges {
            if !ground.contains_set(e) {
                let element = e.max_element().unwrap_or(0);
                return Err(Error::ElementOutOfRange { element, n });
            }
            if e.len() != k {
                return Err(Error::EdgeCardinality { edge: e.to_string(), found: e.len(), expected: k });
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].to_string()));
        }
        Ok(SetFamily { ground, k, edges })
    }

    /// Like [`SetFamily::new`] but silently merges duplicate edges.
    pub fn from_masks_dedup(n: usize, k: usize, edges: impl IntoIterator<Item = EdgeMask>) -> Result<SetFamily> {
        let mut v: Vec<EdgeMask> = edges.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SetFamily::new(n, k, v)
    }

    pub fn from_lists(n: usize, k: usize, edges: &[&[usize]]) -> Result<SetFamily> {
        let mut masks = Vec::with_capacity(edges.len());
        for list in edges {
            masks.push(edge_from_list(n, list)?);
        }
        SetFamily::new(n, k, masks)
    }

    pub fn empty(n: usize, k: usize) -> Result<SetFamily> {
        SetFamily::new(n, k, std::iter::empty())
    }

    /// Every `k`-subset of the ground set satisfying `keep`.
    pub fn from_predicate(n: usize, k: usize, keep: impl Fn(EdgeMask) -> bool) -> Result<SetFamily> {
        GroundSet::new(n)?;
        if k == 0 || k > n {
            return Err(Error::Uniformity { n, k });
        }
        let edges: Vec<EdgeMask> = k_subsets(n, k).filter(|&e| keep(e)).collect();
        Ok(SetFamily { ground: GroundSet { n }, k, edges })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, k: usize, edges: Vec<EdgeMask>) -> SetFamily {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        SetFamily { ground: GroundSet { n }, k, edges }
    }

    pub fn n(&self) -> usize {
        self.ground.n
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[EdgeMask] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeMask) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn is_intersecting(&self) -> bool {
        let edges = &self.edges;
        edges
            .iter()
            .enumerate()
            .all(|(i, a)| edges[i + 1..].iter().all(|b| a.meets(*b)))
    }

    /// Smallest element common to every edge; errors on the empty family.
    pub fn is_trivial(&self) -> Result<Option<usize>> {
        if self.edges.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(self.common_elements().min_element())
    }

    pub fn common_elements(&self) -> ElementSet {
        self.edges.iter().fold(self.ground.all(), |acc, e| acc.intersection(*e))
    }

    pub fn degree(&self, x: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(x)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n()];
        for e in &self.edges {
            for v in e.elements() {
                d[v] += 1;
            }
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable();
        d
    }

    /// Number of edges avoiding `x`.
    pub fn avoiding(&self, x: usize) -> usize {
        self.edges.len() - self.degree(x)
    }

    pub fn union_of_edges(&self) -> ElementSet {
        self.edges.iter().fold(EdgeMask::EMPTY, |acc, e| acc.union(*e))
    }

    /// The family relabelled by `map` (element `v` goes to `map[v]`).
    pub fn relabel(&self, map: &[usize], n: usize) -> Result<SetFamily> {
        let edges = self
            .edges
            .iter()
            .map(|e| EdgeMask::from_elements(e.elements().map(|v| map[v])));
        SetFamily::new(n, self.k, edges)
    }

    pub fn with_edge(&self, e: EdgeMask) -> Result<SetFamily> {
        let mut v = self.edges.clone();
        v.push(e);
        SetFamily::new(self.n(), self.k, v)
    }

    pub fn edge_lists(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|e| e.to_vec()).collect()
    }

    pub fn to_json_value(&self) -> FamilyJson {
        FamilyJson { n: self.n(), k: self.k, edges: self.edge_lists() }
    }

    /// Canonical JSON: edges sorted by mask value, compact separators.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("family serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<SetFamily> {
        let raw: FamilyJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        raw.into_family()
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}, k={}] ", self.n(), self.k)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Wire form of a family: `{"n": .., "k": .., "edges": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<Vec<usize>>,
}

impl FamilyJson {
    pub fn into_family(self) -> Result<SetFamily> {
        GroundSet::new(self.n).map_err(|e| Error::Json(format!("field `n`: {e}")))?;
        let mut masks = Vec::with_capacity(self.edges.len());
        for (i, list) in self.edges.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Json(format!("edges[{i}]: {}", Error::UnsortedEdge(format!("{list:?}")))));
            }
            let m = edge_from_list(self.n, list).map_err(|e| Error::Json(format!("edges[{i}]: {e}")))?;
            masks.push(m);
        }
        SetFamily::new(self.n, self.k, masks).map_err(|e| Error::Json(e.to_string()))
    }
}

impl From<SetFamily> for FamilyJson {
    fn from(f: SetFamily) -> FamilyJson {
        f.to_json_value()
    }
}

impl TryFrom<FamilyJson> for SetFamily {
    type Error = Error;

    fn try_from(raw: FamilyJson) -> Result<SetFamily> {
        raw.into_family()
    }
}

pub fn edge_from_list(n: usize, list: &[usize]) -> Result<EdgeMask> {
    let mut m = 0u64;
    for &e in list {
        if e >= n {
            return Err(Error::ElementOutOfRange { element: e, n });
        }
        if m >> e & 1 == 1 {
            return Err(Error::DuplicateEdge(format!("{list:?}")));
        }
        m |= 1 << e;
    }
    Ok(EdgeMask(m))
}

/// A random intersecting family: k-subsets are visited in random order and
/// kept when they meet every set kept so far, stopping after `max_len`.
/// Requires `C(n, k)` small enough to list.
pub fn random_intersecting<R: Rng + ?Sized>(n: usize, k: usize, max_len: usize, rng: &mut R) -> Result<SetFamily> {
    SetFamily::empty(n, k)?;
    let mut all: Vec<EdgeMask> = k_subsets(n, k).collect();
    all.shuffle(rng);
    let mut kept: Vec<EdgeMask> = Vec::new();
    for e in all {
        if kept.len() >= max_len {
            break;
        }
        if kept.iter().all(|f| f.meets(e)) {
            kept.push(e);
        }
    }
    SetFamily::new(n, k, kept)
}

/// Searches for an injective map `f` on the ground set of `h` with
/// `f(E) ∈ g` for every edge `E` of `h`; `map[v]` is the image of `v`.
pub fn embeds_into(h: &SetFamily, g: &SetFamily) -> Result<Option<Vec<usize>>> {
    if h.k != g.k {
        return Err(Error::UniformityMismatch(h.k, g.k));
    }
    if h.n() > g.n() || h.len() > g.len() {
        return Ok(None);
    }
    Ok(Embedder::new(h, g).run())
}

pub fn are_isomorphic(a: &SetFamily, b: &SetFamily) -> bool {
    if a.k != b.k || a.n() != b.n() || a.len() != b.len() {
        return false;
    }
    if a.degree_multiset() != b.degree_multiset() {
        return false;
    }
    matches!(embeds_into(a, b), Ok(Some(_))) && matches!(embeds_into(b, a), Ok(Some(_)))
}

struct Embedder<'a> {
    g_edges: HashSet<u64>,
    h_deg: Vec<usize>,
    g_deg: Vec<usize>,
    h_codeg: Vec<Vec<usize>>,
    g_codeg: Vec<Vec<usize>>,
    order: Vec<usize>,
    /// Edges of `h` whose last vertex (in `order`) sits at each position.
    closing: Vec<Vec<EdgeMask>>,
    h: &'a SetFamily,
    g_n: usize,
}

impl<'a> Embedder<'a> {
    fn new(h: &'a SetFamily, g: &SetFamily) -> Embedder<'a> {
        let h_deg = h.degrees();
        let g_deg = g.degrees();
        let h_codeg = codegrees(h);
        let g_codeg = codegrees(g);

        // Greedy order: start from the highest degree vertex, then repeatedly
        // take the vertex most tied (by codegree) to those already placed.
        let mut active: Vec<usize> = (0..h.n()).filter(|&v| h_deg[v] > 0).collect();
        let mut order = Vec::with_capacity(active.len());
        while !active.is_empty() {
            let (idx, _) = active
                .iter()
                .enumerate()
                .max_by_key(|(_, &v)| {
                    let tie: usize = order.iter().map(|&u: &usize| h_codeg[u][v]).sum();
                    (tie, h_deg[v], std::cmp::Reverse(v))
                })
                .expect("nonempty");
            order.push(active.swap_remove(idx));
        }
        let mut pos = vec![usize::MAX; h.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut closing = vec![Vec::new(); order.len()];
        for &e in h.edges() {
            let last = e.elements().map(|v| pos[v]).max().expect("edges are nonempty");
            closing[last].push(e);
        }
        Embedder {
            g_edges: g.edges().iter().map(|e| e.0).collect(),
            h_deg,
            g_deg,
            h_codeg,
            g_codeg,
            order,
            closing,
            h,
            g_n: g.n(),
        }
    }

    fn run(&self) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.h.n()];
        if !self.extend(0, &mut map, 0) {
            return None;
        }
        // Isolated vertices of `h` take any unused images.
        let used: EdgeMask = EdgeMask::from_elements(map.iter().copied().filter(|&v| v != usize::MAX));
        let mut free = (0..self.g_n).filter(|v| !used.contains(*v));
        for slot in map.iter_mut() {
            if *slot == usize::MAX {
                *slot = free.next().expect("h.n <= g.n leaves enough images");
            }
        }
        Some(map)
    }

    fn extend(&self, depth: usize, map: &mut [usize], used: u64) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for target in 0..self.g_n {
            if used >> target & 1 == 1 || self.g_deg[target] < self.h_deg[v] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&u| {
                let need = self.h_codeg[u][v];
                need == 0 || self.g_codeg[map[u]][target] >= need
            });
            if !consistent {
                continue;
            }
            map[v] = target;
            let closes = self.closing[depth].iter().all(|e| {
                let img = e.elements().fold(0u64, |m, w| m | 1 << map[w]);
                self.g_edges.contains(&img)
            });
            if closes && self.extend(depth + 1, map, used | 1 << target) {
                return true;
            }
            map[v] = usize::MAX;
        }
        false
    }
}

fn codegrees(f: &SetFamily) -> Vec<Vec<usize>> {
    let n = f.n();
    let mut c = vec![vec![0usize; n]; n];
    for e in f.edges() {
        let els = e.to_vec();
        for (i, &a) in els.iter().enumerate() {
            for &b in &els[i + 1..] {
                c[a][b] += 1;
                c[b][a] += 1;
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, k: usize, edges: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, k, edges).unwrap()
    }

    fn star(n: usize, k: usize, x: usize) -> SetFamily {
        SetFamily::from_predicate(n, k, |e| e.contains(x)).unwrap()
    }

    #[test]
    fn k_subsets_counts() {
        assert_eq!(k_subsets(7, 3).count(), 35);
        assert_eq!(k_subsets(9, 4).count(), 126);
        assert_eq!(k_subsets(5, 0).count(), 1);
        assert_eq!(k_subsets(3, 4).count(), 0);
        assert_eq!(k_subsets(64, 63).count(), 64);
        let v: Vec<_> = k_subsets(6, 2).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subsets_of(EdgeMask::from_elements([1, 4, 6]), 2).count(), 3);
    }

    #[test]
    fn intersecting_examples() {
        assert!(fam(5, 3, &[&[0, 1, 2], &[0, 3, 4]]).is_intersecting());
        assert!(!fam(6, 3, &[&[0, 1, 2], &[3, 4, 5]]).is_intersecting());
        assert!(star(7, 3, 2).is_intersecting());
        assert!(SetFamily::empty(4, 2).unwrap().is_intersecting());
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(fam(5, 3, &[&[0, 1, 2], &[0, 3, 4]]).is_trivial(), Ok(Some(0)));
        assert_eq!(fam(3, 2, &[&[0, 1], &[1, 2], &[0, 2]]).is_trivial(), Ok(None));
        assert_eq!(fam(3, 3, &[&[0, 1, 2]]).is_trivial(), Ok(Some(0)));
        assert_eq!(SetFamily::empty(3, 2).unwrap().is_trivial(), Err(Error::EmptyFamily));
    }

    #[test]
    fn degree_examples() {
        let f0 = star(7, 3, 0);
        assert_eq!(f0.degree(0), 15);
        assert_eq!(f0.max_degree(), 15);
        let tri = fam(3, 2, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(tri.degree(1), 2);
        assert_eq!(tri.max_degree(), 2);
        assert_eq!(SetFamily::empty(5, 2).unwrap().degree(3), 0);
        assert_eq!(SetFamily::empty(5, 2).unwrap().max_degree(), 0);
        assert_eq!(fam(5, 3, &[&[0, 1, 2], &[0, 1, 3], &[2, 3, 4]]).max_degree(), 2);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(SetFamily::new(0, 1, []), Err(Error::GroundSize(0))));
        assert!(matches!(SetFamily::new(65, 1, []), Err(Error::GroundSize(65))));
        assert!(matches!(SetFamily::new(4, 5, []), Err(Error::Uniformity { .. })));
        let dup = [EdgeMask(0b11), EdgeMask(0b11)];
        assert!(matches!(SetFamily::new(4, 2, dup), Err(Error::DuplicateEdge(_))));
        assert!(matches!(
            SetFamily::new(4, 2, [EdgeMask(0b111)]),
            Err(Error::EdgeCardinality { .. })
        ));
        assert!(matches!(
            SetFamily::new(4, 2, [EdgeMask(0b10001)]),
            Err(Error::ElementOutOfRange { element: 4, n: 4 })
        ));
    }

    #[test]
    fn embedding_examples() {
        let single = fam(7, 3, &[&[0, 1, 2]]);
        assert!(embeds_into(&single, &star(7, 3, 5)).unwrap().is_some());
        let tri = fam(3, 2, &[&[0, 1], &[1, 2], &[0, 2]]);
        // F({1,2}, 0) at n=3, k=2 is itself a triangle.
        let hm = SetFamily::from_predicate(3, 2, |e| e == EdgeMask::from_elements([1, 2]) || e.contains(0)).unwrap();
        assert!(embeds_into(&tri, &hm).unwrap().is_some());
        assert!(matches!(
            embeds_into(&tri, &star(7, 3, 0)),
            Err(Error::UniformityMismatch(2, 3))
        ));
    }

    #[test]
    fn embedding_map_is_valid() {
        let h = fam(6, 3, &[&[0, 1, 2], &[0, 3, 4], &[1, 3, 5]]);
        let g = star(6, 3, 4);
        // h is not trivial, so it cannot sit in a star.
        assert!(embeds_into(&h, &g).unwrap().is_none());
        let g = SetFamily::from_predicate(6, 3, |e| !e.intersection(EdgeMask::prefix(3)).is_empty()).unwrap();
        let map = embeds_into(&h, &g).unwrap().unwrap();
        let mut seen = HashSet::new();
        assert!(map.iter().all(|v| seen.insert(*v)));
        let img = h.relabel(&map, 6).unwrap();
        assert!(img.edges().iter().all(|e| g.contains(*e)));
    }

    #[test]
    fn isomorphism_examples() {
        assert!(are_isomorphic(&star(7, 3, 0), &star(7, 3, 3)));
        let f = fam(6, 3, &[&[0, 1, 2], &[0, 3, 4], &[1, 3, 5]]);
        assert!(are_isomorphic(&f, &f));
        assert!(!are_isomorphic(&star(7, 3, 0), &fam(7, 3, &[&[0, 1, 2]])));
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let text = r#"{"n":5,"k":2,"edges":[[0,1],[0,2],[1,3]]}"#;
        let f = SetFamily::from_json(text).unwrap();
        assert_eq!(f.to_json(), text);
        let shuffled = r#"{"n":5,"k":2,"edges":[[1,3],[0,2],[0,1]]}"#;
        assert_eq!(SetFamily::from_json(shuffled).unwrap().to_json(), text);
    }

    #[test]
    fn json_diagnostics() {
        let err = SetFamily::from_json(r#"{"n":5,"k":2,"edges":[[0,1],[2,1]]}"#).unwrap_err();
        assert!(err.to_string().contains("edges[1]"), "{err}");
        let err = SetFamily::from_json(r#"{"n":5,"k":2,"edges":[[0,9]]}"#).unwrap_err();
        assert!(err.to_string().contains("edges[0]"), "{err}");
        let err = SetFamily::from_json("{\"n\":5,\n\"k\":\"two\"}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(SetFamily::from_json(r#"{"n":5,"k":2,"edges":[[0,1]],"x":1}"#).is_err());
    }
}
