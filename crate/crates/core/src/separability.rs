//! Cross-intersecting splits of a set system.
//!
//! A split `B = B1 ∪ B2` is cross-intersecting exactly when no set of `B1`
//! is disjoint from a set of `B2`, i.e. when no edge of the disjointness
//! graph crosses the split. The cross-intersecting splits are therefore the
//! unions of connected components of that graph, and `B` is non-separable
//! iff the graph is connected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{k_subsets, subsets_of, EdgeMask, SetFamily, MAX_GROUND};

/// Limit on the number of components for partition enumeration.
pub const MAX_COMPONENTS: usize = 30;

/// A family of distinct subsets of `0..n` with arbitrary cardinalities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetSystem {
    n: usize,
    sets: Vec<EdgeMask>,
}

impl SetSystem {
    /// Validates the sets and sorts them by mask value.
    pub fn new(n: usize, mut sets: Vec<EdgeMask>) -> Result<SetSystem> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSize(n));
        }
        let ground = EdgeMask::prefix(n);
        for s in &sets {
            if !s.is_subset_of(ground) {
                let element = s.difference(ground).min_element().unwrap_or(0);
                return Err(Error::ElementOutOfRange { element, n });
            }
        }
        sets.sort_unstable();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].to_string()));
        }
        Ok(SetSystem { n, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[EdgeMask] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Distinct set sizes, ascending.
    pub fn cardinalities(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.sets.iter().map(|s| s.len()).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// The uniform family, when all sets have the same nonzero size.
    pub fn to_family(&self) -> Option<SetFamily> {
        match self.cardinalities().as_slice() {
            [k] if *k > 0 => SetFamily::new(self.n, *k, self.sets.iter().copied()).ok(),
            _ => None,
        }
    }
}

impl From<&SetFamily> for SetSystem {
    fn from(f: &SetFamily) -> SetSystem {
        SetSystem { n: f.n(), sets: f.edges().to_vec() }
    }
}

/// Vertices are the sets; two sets are adjacent iff they are disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointnessGraph {
    vertices: Vec<EdgeMask>,
    adjacency: Vec<Vec<usize>>,
}

impl DisjointnessGraph {
    pub fn new(b: &SetSystem) -> DisjointnessGraph {
        let vertices = b.sets.clone();
        let adjacency = (0..vertices.len())
            .map(|i| (0..vertices.len()).filter(|&j| j != i && !vertices[i].meets(vertices[j])).collect())
            .collect();
        DisjointnessGraph { vertices, adjacency }
    }

    pub fn vertices(&self) -> &[EdgeMask] {
        &self.vertices
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, adj) in self.adjacency.iter().enumerate() {
            out.extend(adj.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    /// Connected components as sorted vertex lists, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                for &w in &self.adjacency[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Every set of `b1` meets every set of `b2`; vacuous if either is empty.
pub fn is_cross_intersecting(b1: &[EdgeMask], b2: &[EdgeMask]) -> bool {
    b1.iter().all(|a| b2.iter().all(|b| a.meets(*b)))
}

/// No cross-intersecting split has two nonempty sides.
pub fn non_separable(b: &SetSystem) -> bool {
    DisjointnessGraph::new(b).components().len() <= 1
}

/// A split of a set system, as indices into [`SetSystem::sets`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl Partition {
    pub fn is_trivial(&self) -> bool {
        self.first.is_empty() || self.second.is_empty()
    }
}

fn splits(b: &SetSystem, ordered: bool) -> Result<Vec<Partition>> {
    let comps = DisjointnessGraph::new(b).components();
    if comps.len() > MAX_COMPONENTS {
        return Err(Error::TooManyComponents(comps.len()));
    }
    if comps.is_empty() {
        return Ok(vec![Partition { first: Vec::new(), second: Vec::new() }]);
    }
    // Unordered splits keep the first component on the first side.
    let free = if ordered { comps.len() } else { comps.len() - 1 };
    let offset = comps.len() - free;
    let mut out = Vec::with_capacity(1 << free);
    for mask in 0u64..1 << free {
        let mut first = Vec::new();
        let mut second = Vec::new();
        for (c, comp) in comps.iter().enumerate() {
            let on_first = c < offset || (mask >> (c - offset)) & 1 == 0;
            if on_first {
                first.extend_from_slice(comp);
            } else {
                second.extend_from_slice(comp);
            }
        }
        first.sort_unstable();
        second.sort_unstable();
        out.push(Partition { first, second });
    }
    out.sort();
    Ok(out)
}

/// All unordered cross-intersecting splits `{B1, B2}`, trivial one
/// included: `2^(c-1)` of them for `c >= 1` components.
pub fn cross_intersecting_partitions(b: &SetSystem) -> Result<Vec<Partition>> {
    splits(b, false)
}

/// All ordered cross-intersecting splits `(B1, B2)`: `2^c` of them.
pub fn ordered_cross_intersecting_partitions(b: &SetSystem) -> Result<Vec<Partition>> {
    splits(b, true)
}

/// `{ {z1} ∪ D : D ⊆ C, |D| = a } ∪ { {z2} ∪ E : E ⊆ C, |E| = b }` with
/// `C = {0..c_size-1}`, `z1 = c_size`, `z2 = c_size + 1`. The parameter `s`
/// defaults to `a + b`; it must satisfy `s >= 2`, `a + b <= s` and
/// `c_size >= s + 1`.
pub fn build_prop1_family(c_size: usize, a: usize, b: usize, s: Option<usize>) -> Result<SetSystem> {
    let s = s.unwrap_or(a + b);
    if a == 0 || b == 0 {
        return Err(Error::Precondition(format!("a={a} and b={b} must be at least 1")));
    }
    if s < 2 || a + b > s {
        return Err(Error::Precondition(format!("need s >= 2 and a + b <= s, got a={a}, b={b}, s={s}")));
    }
    if c_size < s + 1 {
        return Err(Error::Precondition(format!("|C|={c_size} must be at least s + 1 = {}", s + 1)));
    }
    let n = c_size + 2;
    if n > MAX_GROUND {
        return Err(Error::GroundSize(n));
    }
    let c = EdgeMask::prefix(c_size);
    let (z1, z2) = (c_size, c_size + 1);
    let mut sets: Vec<EdgeMask> = subsets_of(c, a).map(|d| d.with(z1)).collect();
    sets.extend(subsets_of(c, b).map(|e| e.with(z2)));
    SetSystem::new(n, sets)
}

/// The `r`-subsets `B` of `Z = {0..m-1}` with `0 < |B ∩ A| < |A|`, where
/// `A = {0..a_size-1}`; requires `r >= 2`, `m >= 2r + 1`,
/// `a_size ∈ {r-1, r}`.
pub fn build_prop2_family(m: usize, r: usize, a_size: usize) -> Result<SetFamily> {
    if r < 2 {
        return Err(Error::Precondition(format!("r={r} must be at least 2")));
    }
    if m < 2 * r + 1 {
        return Err(Error::Precondition(format!("m={m} must be at least 2r + 1 = {}", 2 * r + 1)));
    }
    if a_size + 1 != r && a_size != r {
        return Err(Error::Precondition(format!("|A|={a_size} must be r - 1 or r")));
    }
    let a = EdgeMask::prefix(a_size);
    SetFamily::new(m, r, k_subsets(m, r).filter(|b| (1..a_size).contains(&b.intersection(a).len())))
}

/// `K_{2,3}` with parts `{0,1}` and `{2,3,4}`.
pub fn k23() -> SetFamily {
    let edges = [0, 1].into_iter().flat_map(|u| (2..5).map(move |v| EdgeMask::from_elements([u, v])));
    SetFamily::new(5, 2, edges).expect("valid graph")
}

/// `K_{2,3}` minus each of its edges in turn.
pub fn k23_single_deletions() -> Vec<SetFamily> {
    let g = k23();
    g.edges()
        .iter()
        .map(|&drop| SetFamily::new(5, 2, g.edges().iter().copied().filter(|&e| e != drop)).expect("valid graph"))
        .collect()
}

/// `K_5` minus each pair of its edges: 45 graphs.
pub fn k5_two_edge_deletions() -> Vec<SetFamily> {
    let k5: Vec<EdgeMask> = k_subsets(5, 2).collect();
    let mut out = Vec::new();
    for i in 0..k5.len() {
        for j in i + 1..k5.len() {
            let edges = k5.iter().copied().filter(|&e| e != k5[i] && e != k5[j]);
            out.push(SetFamily::new(5, 2, edges).expect("valid graph"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, sets: &[&[usize]]) -> SetSystem {
        SetSystem::new(n, sets.iter().map(|s| EdgeMask::from_elements(s.iter().copied())).collect()).unwrap()
    }

    #[test]
    fn cross_intersecting_examples() {
        let a = [EdgeMask::from_elements([0, 1])];
        assert!(is_cross_intersecting(&a, &[EdgeMask::from_elements([1, 2])]));
        assert!(!is_cross_intersecting(&a, &[EdgeMask::from_elements([2, 3])]));
        assert!(is_cross_intersecting(&a, &[]));
    }

    #[test]
    fn star_is_separable_with_eight_splits() {
        let star = sys(4, &[&[0, 1], &[0, 2], &[0, 3]]);
        assert!(!non_separable(&star));
        assert_eq!(ordered_cross_intersecting_partitions(&star).unwrap().len(), 8);
        assert_eq!(cross_intersecting_partitions(&star).unwrap().len(), 4);
    }

    #[test]
    fn small_systems_are_non_separable() {
        assert!(non_separable(&sys(3, &[])));
        assert!(non_separable(&sys(3, &[&[0, 1]])));
        assert_eq!(cross_intersecting_partitions(&sys(3, &[])).unwrap().len(), 1);
    }

    #[test]
    fn k23_and_k5_deletions() {
        assert!(non_separable(&SetSystem::from(&k23())));
        assert_eq!(k23_single_deletions().len(), 6);
        assert_eq!(k5_two_edge_deletions().len(), 45);
        assert!(k5_two_edge_deletions().iter().all(|g| non_separable(&SetSystem::from(g))));
    }

    #[test]
    fn prop_examples() {
        let c = build_prop1_family(3, 1, 1, None).unwrap();
        assert_eq!(c.len(), 6);
        assert!(non_separable(&c));
        assert_eq!(cross_intersecting_partitions(&c).unwrap().len(), 1);
        assert!(non_separable(&build_prop1_family(4, 1, 2, Some(3)).unwrap()));
        assert!(build_prop1_family(2, 1, 1, None).is_err());
        let b = build_prop2_family(5, 2, 2).unwrap();
        assert!(crate::family::are_isomorphic(&b, &k23()));
        assert!(non_separable(&SetSystem::from(&b)));
        assert!(build_prop2_family(5, 2, 1).unwrap().is_empty());
        assert!(build_prop2_family(4, 2, 2).is_err());
    }

    #[test]
    fn mixed_cardinalities_are_kept() {
        let c = build_prop1_family(4, 1, 2, None).unwrap();
        assert_eq!(c.cardinalities(), vec![2, 3]);
        assert!(c.to_family().is_none());
    }

    #[test]
    fn too_many_components() {
        let sets: Vec<EdgeMask> = (0..31).map(EdgeMask::singleton).map(|e| e.with(40)).collect();
        let b = SetSystem::new(41, sets).unwrap();
        assert_eq!(DisjointnessGraph::new(&b).components().len(), 31);
        assert!(matches!(cross_intersecting_partitions(&b), Err(Error::TooManyComponents(31))));
    }
}
