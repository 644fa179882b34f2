//! Slow reference implementations used to cross-check the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use ekrw_core::{k_subsets, EdgeMask, SetFamily};

/// Every ordered split `(B1, B2)` of `sets` with `B1` and `B2`
/// cross-intersecting, found by trying all `2^|B|` assignments. Sides are
/// index lists.
pub fn brute_force_splits(sets: &[EdgeMask]) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    assert!(sets.len() <= 20, "brute force limited to 20 sets");
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << sets.len() {
        let first: Vec<usize> = (0..sets.len()).filter(|i| mask >> i & 1 == 0).collect();
        let second: Vec<usize> = (0..sets.len()).filter(|i| mask >> i & 1 == 1).collect();
        let ok = first.iter().all(|&i| second.iter().all(|&j| sets[i].meets(sets[j])));
        if ok {
            out.insert((first, second));
        }
    }
    out
}

pub fn brute_force_non_separable(sets: &[EdgeMask]) -> bool {
    brute_force_splits(sets).iter().all(|(a, b)| a.is_empty() || b.is_empty())
}

/// Family-level exclusion predicates, written out directly.
#[derive(Debug, Clone, Copy, Default)]
pub struct Exclusions {
    pub trivial: bool,
    pub hm: bool,
    pub g2: bool,
    pub cap: Option<usize>,
}

fn avoiding(edges: &[EdgeMask], x: usize) -> usize {
    edges.iter().filter(|e| !e.contains(x)).count()
}

pub fn admissible(n: usize, edges: &[EdgeMask], ex: &Exclusions) -> bool {
    let intersecting = edges.iter().enumerate().all(|(i, a)| edges[i + 1..].iter().all(|b| a.meets(*b)));
    if !intersecting {
        return false;
    }
    if ex.trivial && (0..n).any(|x| avoiding(edges, x) < 1) {
        return false;
    }
    if ex.hm && (0..n).any(|x| avoiding(edges, x) < 2) {
        return false;
    }
    if ex.g2 && k_subsets(n, 3).any(|s| edges.iter().all(|e| e.intersection(s).len() >= 2)) {
        return false;
    }
    if let Some(cap) = ex.cap {
        if (0..n).any(|x| edges.len() - avoiding(edges, x) > cap) {
            return false;
        }
    }
    true
}

/// All maximal intersecting families, by Bron–Kerbosch with pivoting on
/// the "meets" graph of k-subsets.
pub fn maximal_intersecting(n: usize, k: usize) -> Vec<Vec<EdgeMask>> {
    let verts: Vec<EdgeMask> = k_subsets(n, k).collect();
    assert!(verts.len() <= 64, "oracle limited to 64 candidates");
    let adj: Vec<u64> = verts
        .iter()
        .enumerate()
        .map(|(i, a)| {
            verts.iter().enumerate().filter(|&(j, b)| j != i && a.meets(*b)).fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    let mut out = Vec::new();
    let all = if verts.len() == 64 { u64::MAX } else { (1u64 << verts.len()) - 1 };
    bron_kerbosch(0, all, 0, &adj, &mut |r| {
        out.push((0..verts.len()).filter(|i| r >> i & 1 == 1).map(|i| verts[i]).collect())
    });
    out
}

fn bron_kerbosch(r: u64, p: u64, x: u64, adj: &[u64], emit: &mut dyn FnMut(u64)) {
    if p == 0 && x == 0 {
        emit(r);
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut cand = p & !adj[pivot];
    let (mut p, mut x) = (p, x);
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        bron_kerbosch(r | 1 << v, p & adj[v], x & adj[v], adj, emit);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Maximum admissible families for exclusions closed under adding sets
/// (no degree cap): every maximum one is a maximal intersecting family.
pub fn max_admissible_upward(n: usize, k: usize, ex: &Exclusions) -> (usize, Vec<SetFamily>) {
    assert!(ex.cap.is_none());
    let good: Vec<Vec<EdgeMask>> = maximal_intersecting(n, k).into_iter().filter(|f| admissible(n, f, ex)).collect();
    let best = good.iter().map(Vec::len).max().unwrap_or(0);
    let fams = good
        .into_iter()
        .filter(|f| f.len() == best && best > 0)
        .map(|f| SetFamily::new(n, k, f).unwrap())
        .collect();
    (best, fams)
}

/// Maximum admissible size over every intersecting subfamily, by plain
/// depth-first enumeration. Handles the degree cap, which is not closed
/// under adding sets.
pub fn max_admissible_exhaustive(n: usize, k: usize, ex: &Exclusions) -> usize {
    let verts: Vec<EdgeMask> = k_subsets(n, k).collect();
    let mut best = 0;
    let mut chosen = Vec::new();
    dfs(n, &verts, 0, &mut chosen, ex, &mut best);
    best
}

fn dfs(n: usize, verts: &[EdgeMask], from: usize, chosen: &mut Vec<EdgeMask>, ex: &Exclusions, best: &mut usize) {
    if chosen.len() > *best && admissible(n, chosen, ex) {
        *best = chosen.len();
    }
    for i in from..verts.len() {
        if chosen.iter().all(|c| c.meets(verts[i])) {
            chosen.push(verts[i]);
            dfs(n, verts, i + 1, chosen, ex, best);
            chosen.pop();
        }
    }
}

/// Every intersecting family `H` with `S_xy(H) = target`, by trying all
/// ways of moving sets of `target` that contain `x` but not `y` back.
pub fn brute_force_preimages(target: &SetFamily, x: usize, y: usize) -> BTreeSet<Vec<EdgeMask>> {
    let movable: Vec<EdgeMask> =
        target.edges().iter().copied().filter(|e| e.contains(x) && !e.contains(y)).collect();
    assert!(movable.len() <= 20);
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << movable.len() {
        let mut edges: Vec<EdgeMask> = target.edges().iter().copied().filter(|e| !movable.contains(e)).collect();
        for (i, e) in movable.iter().enumerate() {
            edges.push(if mask >> i & 1 == 1 { e.without(x).with(y) } else { *e });
        }
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != target.len() {
            continue;
        }
        let Ok(h) = SetFamily::new(target.n(), target.k(), edges.clone()) else { continue };
        if h.is_intersecting() && naive_shift(&h, x, y) == *target.edges() {
            out.insert(edges);
        }
    }
    out
}

/// `S_xy` written directly from its definition.
pub fn naive_shift(h: &SetFamily, x: usize, y: usize) -> Vec<EdgeMask> {
    let mut out: Vec<EdgeMask> = h
        .edges()
        .iter()
        .map(|&e| {
            if e.contains(y) && !e.contains(x) {
                let moved = e.without(y).with(x);
                if !h.contains(moved) {
                    return moved;
                }
            }
            e
        })
        .collect();
    out.sort_unstable();
    out
}
