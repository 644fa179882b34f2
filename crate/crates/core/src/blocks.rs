//! Partition bound for the branch-and-bound search.
//!
//! The candidate universe is split into small blocks and the independence
//! number (largest pairwise-intersecting subfamily) of every subset of each
//! block is tabulated. For any set of still-available candidates, the sum of
//! the tabulated values over the blocks bounds the number of candidates that
//! can still be added.
//!
//! Blocks come from cyclic orders of the ground set: the `n` windows of `k`
//! consecutive elements of a cyclic order contain at most `k` pairwise
//! intersecting ones when `n >= 2k`, so when the windows of `C(n,k)/n`
//! cyclic orders partition the universe the root bound is `C(n-1,k-1)`.
//!
//! Such a partition is searched for in two ways. For small `n`, every
//! cyclic order is examined and those whose rotations `x -> x + t (mod n)`
//! tile whole rotation orbits of k-sets are combined by an exact cover over
//! orbits. Otherwise random cyclic orders are packed greedily and the
//! leftovers are paired. Relabelled copies of the partition give further
//! valid partitions, and the bound is the minimum over all of them.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::family::EdgeMask;

const MAX_BLOCK: usize = 16;
/// Largest ground set for which all cyclic orders are enumerated.
const EXHAUSTIVE_CYCLES: usize = 9;
const COVER_BUDGET: u64 = 2_000_000;
const RANDOM_ATTEMPTS: usize = 40;

#[derive(Debug, Clone)]
pub struct Block {
    pub members: Vec<usize>,
    alpha: Vec<u8>,
}

impl Block {
    fn new(members: Vec<usize>, cands: &[EdgeMask]) -> Block {
        assert!(members.len() <= MAX_BLOCK);
        let b = members.len();
        let adj: Vec<u32> = (0..b)
            .map(|i| {
                (0..b)
                    .filter(|&j| j != i && !cands[members[i]].meets(cands[members[j]]))
                    .fold(0u32, |m, j| m | 1 << j)
            })
            .collect();
        let mut alpha = vec![0u8; 1 << b];
        for s in 1usize..1 << b {
            let v = s.trailing_zeros() as usize;
            let without = s & !(1 << v);
            let with = without & !(adj[v] as usize);
            alpha[s] = alpha[without].max(1 + alpha[with]);
        }
        Block { members, alpha }
    }

    #[inline]
    fn value(&self, avail: &Bits) -> usize {
        let mut local = 0usize;
        for (i, &m) in self.members.iter().enumerate() {
            if avail.contains(m) {
                local |= 1 << i;
            }
        }
        self.alpha[local] as usize
    }

    pub fn root_value(&self) -> usize {
        self.alpha[self.alpha.len() - 1] as usize
    }
}

#[derive(Debug, Clone)]
pub struct BlockBound {
    /// Each entry partitions the whole universe.
    pub partitions: Vec<Vec<Block>>,
    /// Whether every block is the window set of a full cyclic order.
    pub perfect: bool,
}

impl BlockBound {
    #[inline]
    pub fn bound(&self, avail: &Bits) -> usize {
        self.bound_below(avail, 0)
    }

    /// Minimum over partitions; stops early once a partition gives a value
    /// below `stop`.
    #[inline]
    pub fn bound_below(&self, avail: &Bits, stop: usize) -> usize {
        let mut best = usize::MAX;
        for p in &self.partitions {
            let v: usize = p.iter().map(|b| b.value(avail)).sum();
            best = best.min(v);
            if best < stop {
                break;
            }
        }
        best
    }

    pub fn root_bound(&self) -> usize {
        self.partitions
            .iter()
            .map(|p| p.iter().map(Block::root_value).sum())
            .min()
            .unwrap_or(0)
    }

    /// Builds `copies` partitions of `cands` (all k-subsets of `0..n`).
    /// Deterministic for a given `(n, k, copies)`.
    pub fn build(
        n: usize,
        k: usize,
        cands: &[EdgeMask],
        index: &dyn Fn(EdgeMask) -> Option<usize>,
        copies: usize,
    ) -> BlockBound {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ ((n as u64) << 8) ^ k as u64);
        let (base, perfect) = base_partition(n, k, cands, index, &mut rng);
        let mut partitions = vec![base.iter().map(|m| Block::new(m.clone(), cands)).collect::<Vec<_>>()];
        let mut perm: Vec<usize> = (0..n).collect();
        for _ in 1..copies.max(1) {
            perm.shuffle(&mut rng);
            let relabelled = base
                .iter()
                .map(|m| {
                    let moved = m
                        .iter()
                        .map(|&i| {
                            let e = EdgeMask::from_elements(cands[i].elements().map(|x| perm[x]));
                            index(e).expect("relabelling preserves the universe")
                        })
                        .collect();
                    Block::new(moved, cands)
                })
                .collect();
            partitions.push(relabelled);
        }
        BlockBound { partitions, perfect }
    }
}

fn base_partition(
    n: usize,
    k: usize,
    cands: &[EdgeMask],
    index: &dyn Fn(EdgeMask) -> Option<usize>,
    rng: &mut ChaCha8Rng,
) -> (Vec<Vec<usize>>, bool) {
    let total = cands.len();
    let cyclic_ok = n <= MAX_BLOCK && 2 * k <= n && k >= 1 && total.is_multiple_of(n);
    if !cyclic_ok {
        let all: Vec<usize> = (0..total).collect();
        return (pair_up(&all, cands), false);
    }
    if n <= EXHAUSTIVE_CYCLES {
        if let Some(p) = orbit_cover(n, k, cands, index) {
            return (p, true);
        }
    }
    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
    let attempts = if n <= EXHAUSTIVE_CYCLES { RANDOM_ATTEMPTS } else { RANDOM_ATTEMPTS / 8 };
    for _ in 0..attempts {
        let (cycles, leftover) = greedy_cycles(n, k, total, index, rng);
        if leftover.is_empty() {
            return (cycles, true);
        }
        if best.as_ref().is_none_or(|(s, _)| leftover.len() < *s) {
            let mut blocks = cycles;
            blocks.extend(pair_up(&leftover, cands));
            best = Some((leftover.len(), blocks));
        }
    }
    (best.expect("at least one attempt").1, false)
}

/// Greedy packing of leftovers into disjoint pairs (independence number 1).
fn pair_up(items: &[usize], cands: &[EdgeMask]) -> Vec<Vec<usize>> {
    let mut used = vec![false; items.len()];
    let mut out = Vec::new();
    for i in 0..items.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (i + 1..items.len()).find(|&j| !used[j] && !cands[items[i]].meets(cands[items[j]]));
        match partner {
            Some(j) => {
                used[j] = true;
                out.push(vec![items[i], items[j]]);
            }
            None => out.push(vec![items[i]]),
        }
    }
    out
}

fn window(order: &[usize], start: usize, k: usize) -> EdgeMask {
    let n = order.len();
    EdgeMask::from_elements((0..k).map(|d| order[(start + d) % n]))
}

fn rotate(e: EdgeMask, t: usize, n: usize) -> EdgeMask {
    EdgeMask::from_elements(e.elements().map(|x| (x + t) % n))
}

/// Cycles whose rotations tile a union of rotation orbits, combined by an
/// exact cover of the orbits.
fn orbit_cover(
    n: usize,
    k: usize,
    cands: &[EdgeMask],
    index: &dyn Fn(EdgeMask) -> Option<usize>,
) -> Option<Vec<Vec<usize>>> {
    let mut orbit_of = vec![usize::MAX; cands.len()];
    let mut orbits = 0usize;
    for (i, &e) in cands.iter().enumerate() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        for t in 0..n {
            orbit_of[index(rotate(e, t, n))?] = orbits;
        }
        orbits += 1;
    }
    if orbits > 64 {
        return None;
    }

    // One representative tiling per covered orbit set.
    let mut units: HashMap<u64, Vec<Vec<usize>>> = HashMap::new();
    let mut order = vec![0usize];
    let mut used = 1u64;
    enumerate_orders(n, &mut order, &mut used, &mut |ord| {
        let windows: Vec<usize> = match (0..n).map(|s| index(window(ord, s, k))).collect::<Option<Vec<_>>>() {
            Some(w) => w,
            None => return,
        };
        let mask = windows.iter().fold(0u64, |m, &w| m | 1 << orbit_of[w]);
        if units.contains_key(&mask) {
            return;
        }
        let mut covered = Bits::EMPTY;
        let mut translates: Vec<Vec<usize>> = Vec::new();
        let mut distinct: Vec<Bits> = Vec::new();
        for t in 0..n {
            let moved: Vec<usize> = windows
                .iter()
                .map(|&w| index(rotate(cands[w], t, n)).expect("rotation stays in the universe"))
                .collect();
            let set: Bits = moved.iter().copied().collect();
            if set.count() != n {
                return;
            }
            if distinct.contains(&set) {
                continue;
            }
            if set.intersects(&covered) {
                return;
            }
            covered = covered.or(&set);
            distinct.push(set);
            translates.push(moved);
        }
        units.insert(mask, translates);
    });

    let full = if orbits == 64 { u64::MAX } else { (1u64 << orbits) - 1 };
    let mut masks: Vec<u64> = units.keys().copied().collect();
    masks.sort_unstable();
    let by_orbit: Vec<Vec<u64>> = (0..orbits)
        .map(|o| masks.iter().copied().filter(|m| m >> o & 1 == 1).collect())
        .collect();
    let mut chosen = Vec::new();
    let mut budget = COVER_BUDGET;
    if !exact_cover(full, 0, &by_orbit, &mut chosen, &mut budget) {
        return None;
    }
    Some(chosen.iter().flat_map(|m| units[m].clone()).collect())
}

/// Cyclic orders starting at 0, one per reflection pair.
fn enumerate_orders(n: usize, order: &mut Vec<usize>, used: &mut u64, visit: &mut dyn FnMut(&[usize])) {
    if order.len() == n {
        if n < 3 || order[1] < order[n - 1] {
            visit(order);
        }
        return;
    }
    for v in 1..n {
        if *used >> v & 1 == 0 {
            *used |= 1 << v;
            order.push(v);
            enumerate_orders(n, order, used, visit);
            order.pop();
            *used &= !(1 << v);
        }
    }
}

fn exact_cover(full: u64, covered: u64, by_orbit: &[Vec<u64>], chosen: &mut Vec<u64>, budget: &mut u64) -> bool {
    if covered == full {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let o = (!covered & full).trailing_zeros() as usize;
    for &m in &by_orbit[o] {
        if m & covered == 0 {
            chosen.push(m);
            if exact_cover(full, covered | m, by_orbit, chosen, budget) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn greedy_cycles(
    n: usize,
    k: usize,
    total: usize,
    index: &dyn Fn(EdgeMask) -> Option<usize>,
    rng: &mut ChaCha8Rng,
) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut covered = Bits::EMPTY;
    let mut cycles = Vec::new();
    let wanted = total / n;
    let mut misses = 0;
    while cycles.len() < wanted && misses < 3 {
        let mut order = vec![0usize];
        let mut budget: u64 = 200_000;
        match extend_cycle(n, k, &mut order, &covered, index, rng, &mut budget) {
            Some(windows) => {
                for &w in &windows {
                    covered.insert(w);
                }
                cycles.push(windows);
            }
            None => misses += 1,
        }
    }
    let leftover = (0..total).filter(|&i| !covered.contains(i)).collect();
    (cycles, leftover)
}

fn extend_cycle(
    n: usize,
    k: usize,
    order: &mut Vec<usize>,
    covered: &Bits,
    index: &dyn Fn(EdgeMask) -> Option<usize>,
    rng: &mut ChaCha8Rng,
    budget: &mut u64,
) -> Option<Vec<usize>> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    if order.len() == n {
        let mut windows = Vec::with_capacity(n);
        for s in 0..n {
            let idx = index(window(order, s, k))?;
            if covered.contains(idx) || windows.contains(&idx) {
                return None;
            }
            windows.push(idx);
        }
        return Some(windows);
    }
    let used = EdgeMask::from_elements(order.iter().copied());
    let mut next: Vec<usize> = (0..n).filter(|v| !used.contains(*v)).collect();
    next.shuffle(rng);
    for v in next {
        order.push(v);
        let ok = order.len() < k || {
            let w = EdgeMask::from_elements(order[order.len() - k..].iter().copied());
            index(w).is_some_and(|i| !covered.contains(i))
        };
        if ok {
            if let Some(ws) = extend_cycle(n, k, order, covered, index, rng, budget) {
                return Some(ws);
            }
        }
        order.pop();
        if *budget == 0 {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::k_subsets;

    fn universe(n: usize, k: usize) -> (Vec<EdgeMask>, HashMap<u64, usize>) {
        let cands: Vec<EdgeMask> = k_subsets(n, k).collect();
        let idx = cands.iter().enumerate().map(|(i, e)| (e.0, i)).collect();
        (cands, idx)
    }

    #[test]
    fn blocks_partition_the_universe_and_bound_is_valid() {
        for (n, k) in [(5, 2), (7, 3), (8, 3), (9, 4), (10, 3)] {
            let (cands, idx) = universe(n, k);
            let bb = BlockBound::build(n, k, &cands, &|e| idx.get(&e.0).copied(), 3);
            assert_eq!(bb.partitions.len(), 3);
            for p in &bb.partitions {
                let mut seen = vec![0; cands.len()];
                for b in p {
                    for &m in &b.members {
                        seen[m] += 1;
                    }
                }
                assert!(seen.iter().all(|&c| c == 1), "({n},{k}) not a partition");
            }
            let ekr = crate::canonical::ekr_bound(n, k).unwrap() as usize;
            assert!(bb.root_bound() >= ekr);
            // A star is available in full, so the bound must admit it.
            let star: Bits = cands.iter().enumerate().filter(|(_, e)| e.contains(0)).map(|(i, _)| i).collect();
            assert!(bb.bound(&star) >= ekr);
        }
    }

    #[test]
    fn cyclic_partitions_are_tight() {
        for (n, k) in [(5, 2), (7, 3), (8, 3), (9, 4)] {
            let (cands, idx) = universe(n, k);
            let bb = BlockBound::build(n, k, &cands, &|e| idx.get(&e.0).copied(), 1);
            assert!(bb.perfect, "({n},{k})");
            assert_eq!(bb.root_bound() as u64, crate::canonical::ekr_bound(n, k).unwrap());
        }
    }

    #[test]
    fn cycle_window_alpha_is_k() {
        let (cands, idx) = universe(9, 4);
        let order: Vec<usize> = (0..9).collect();
        let members: Vec<usize> = (0..9).map(|s| idx[&window(&order, s, 4).0]).collect();
        let b = Block::new(members, &cands);
        assert_eq!(b.root_value(), 4);
    }
}
