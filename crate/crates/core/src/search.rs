//! Exact maximum-size search for intersecting k-uniform families under
//! exclusion constraints.
//!
//! The search is a branch-and-bound over the `C(n,k)` candidate sets:
//! each node fixes some candidates in (`chosen`) and keeps the set of
//! candidates that can still be added (`avail`: not excluded and meeting
//! every chosen set). Nodes are pruned by
//!
//! * the block partition bound from [`crate::blocks`],
//! * the degree-capacity bound when a maximum degree is imposed,
//! * constraint counters: the final family is a subset of
//!   `chosen ∪ avail`, so if that pool already fails a monotone exclusion
//!   requirement, every completion fails it too.
//!
//! The first edge is fixed to `{0,..,k-1}`; for constraints that force a
//! non-trivial family a second edge avoiding 0 is fixed up to the symmetry
//! that preserves the first edge and 0.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{Bits, CAPACITY};
use crate::blocks::BlockBound;
use crate::canonical::{self, binom, CanonicalSpec};
use crate::error::{Error, Result};
use crate::family::{are_isomorphic, embeds_into, k_subsets, EdgeMask, SetFamily};

/// Which families are admissible.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSet {
    /// Exclude families inside a star: some edge avoids every element.
    pub forbid_trivial: bool,
    /// Exclude families that are EKR or HM at some element: at least two
    /// edges avoid every element.
    pub forbid_hm: bool,
    /// Exclude families inside some `T(S)`: for every 3-set `S` some edge
    /// meets `S` in at most one element.
    pub forbid_g2: bool,
    /// Exploratory: exclude families embeddable into `J_2`. Checked only on
    /// complete candidate families.
    #[serde(default)]
    pub forbid_j2: bool,
    pub max_degree_cap: Option<usize>,
}

impl ConstraintSet {
    pub fn none() -> ConstraintSet {
        ConstraintSet::default()
    }

    pub fn non_trivial() -> ConstraintSet {
        ConstraintSet { forbid_trivial: true, ..Default::default() }
    }

    pub fn beyond_hm(k: usize) -> ConstraintSet {
        ConstraintSet { forbid_trivial: true, forbid_hm: true, forbid_g2: k == 3, ..Default::default() }
    }

    pub fn with_cap(cap: usize) -> ConstraintSet {
        ConstraintSet { max_degree_cap: Some(cap), ..Default::default() }
    }

    /// Parses a comma separated list such as `trivial,hm,g2`.
    pub fn parse_forbid(list: &str) -> Result<ConstraintSet> {
        let mut c = ConstraintSet::default();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "trivial" => c.forbid_trivial = true,
                "hm" => c.forbid_hm = true,
                "g2" => c.forbid_g2 = true,
                "j2" => c.forbid_j2 = true,
                other => return Err(Error::Precondition(format!("unknown exclusion `{other}`"))),
            }
        }
        Ok(c)
    }

    /// Minimum number of edges that must avoid each element.
    fn avoid_need(&self) -> usize {
        if self.forbid_hm {
            2
        } else if self.forbid_trivial {
            1
        } else {
            0
        }
    }

    /// Checks a concrete family against every active constraint, without
    /// any of the search machinery.
    pub fn admits(&self, fam: &SetFamily) -> bool {
        if !fam.is_intersecting() {
            return false;
        }
        let need = self.avoid_need();
        if need > 0 && (0..fam.n()).any(|x| fam.avoiding(x) < need) {
            return false;
        }
        if self.forbid_g2 {
            let inside_some_t = k_subsets(fam.n(), 3)
                .any(|s| fam.edges().iter().all(|e| e.intersection(s).len() >= 2));
            if inside_some_t {
                return false;
            }
        }
        if let Some(cap) = self.max_degree_cap {
            if fam.max_degree() > cap {
                return false;
            }
        }
        if self.forbid_j2 && fam.k() >= 2 && fam.n() >= fam.k() + 2 {
            if let Ok(j2) = canonical::build(&CanonicalSpec::j(fam.n(), fam.k(), 2)) {
                if matches!(embeds_into(fam, &j2), Ok(Some(_))) {
                    return false;
                }
            }
        }
        true
    }

    fn forces_nontrivial(&self) -> bool {
        self.forbid_trivial || self.forbid_hm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneReason {
    Bound,
    Constraint,
    Capacity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneRecord {
    /// Task index, or `None` while the tasks were being split off.
    pub task: Option<usize>,
    pub root: usize,
    /// Branching decisions below the root, see [`TaskPath`].
    pub path: Vec<i32>,
    pub reason: PruneReason,
    /// Upper bound at the pruned node (size of chosen plus bound on the rest).
    pub bound: usize,
    /// Incumbent the bound was compared against.
    pub incumbent: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneCounts {
    pub bound: u64,
    pub constraint: u64,
    pub capacity: u64,
}

/// A node of the search tree: a root followed by branching decisions.
/// `+i` includes candidate `i - 1`; `-i` excludes every available candidate
/// in the orbit of candidate `i - 1` under the node's symmetry group (the
/// permutations of the ground set that fix each cell of the partition
/// generated by the included edges).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskPath {
    pub root: usize,
    pub path: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub name: String,
    pub size: usize,
}

/// Proof log of a search: how the tree was rooted and split, the bound
/// used, and the pruned nodes (capped).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub proven: bool,
    /// Candidate universe order: index `i` is the i-th k-subset by mask value.
    pub universe_size: usize,
    /// Edge sets forced into each root; the roots jointly cover every
    /// isomorphism class of admissible nonempty families.
    pub roots: Vec<Vec<Vec<usize>>>,
    /// Block partition of the universe (candidate indices) used for bounds.
    pub blocks: Vec<Vec<usize>>,
    pub blocks_from_cycles: bool,
    pub root_bound: usize,
    /// Named construction used as the starting incumbent, if any is
    /// admissible.
    pub seed: Option<SeedRecord>,
    /// Independently searched subtrees of the final pass.
    pub tasks: Vec<TaskPath>,
    pub prunes: PruneCounts,
    pub log: Vec<PruneRecord>,
    pub log_truncated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub n: usize,
    pub k: usize,
    pub constraints: ConstraintSet,
    /// Exact maximum when `complete`, otherwise a lower bound. Zero when no
    /// admissible family exists.
    pub optimum: usize,
    pub complete: bool,
    /// Maximum families, one per isomorphism class, in canonical order.
    /// Complete only for [`enumerate_maximum`].
    pub witnesses: Vec<SetFamily>,
    /// Number of maximum-size leaves met by the final pass. Symmetric
    /// branches are cut, so this is not a count of labelled families.
    pub labelled_witnesses: usize,
    pub explored_nodes: u64,
    #[serde(with = "duration_ms")]
    pub elapsed: Duration,
    pub certificate: Certificate,
}

mod duration_ms {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        (d.as_secs_f64() * 1000.0).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let ms = f64::deserialize(d)?;
        Ok(Duration::from_secs_f64(ms / 1000.0))
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub budget: Option<Duration>,
    pub workers: usize,
    /// Maximum number of prune records kept in the certificate.
    pub log_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig { budget: Some(Duration::from_secs(300)), workers: 1, log_limit: 1000 }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: Duration) -> SearchConfig {
        SearchConfig { budget: Some(budget), ..Default::default() }
    }
}

/// Maximum size of an admissible family, with the witnesses met on the way.
/// The witness list may miss isomorphism classes; use [`enumerate_maximum`]
/// for a complete list.
pub fn max_family(n: usize, k: usize, constraints: &ConstraintSet, config: &SearchConfig) -> Result<SearchOutcome> {
    run(n, k, constraints, config, Mode::Optimize)
}

/// Like [`max_family`] but every maximum family is found, and the
/// witnesses are reduced to one representative per isomorphism class.
pub fn enumerate_maximum(
    n: usize,
    k: usize,
    constraints: &ConstraintSet,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    run(n, k, constraints, config, Mode::Enumerate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Optimize,
    Enumerate,
}

/// Static data shared by every node of one search.
struct Universe {
    n: usize,
    k: usize,
    cands: Vec<EdgeMask>,
    index: HashMap<u64, usize>,
    conflict: Vec<Bits>,
    /// Per element: candidates containing it.
    contains: Vec<Bits>,
    /// Per element: candidates avoiding it.
    avoid: Vec<Bits>,
    /// Per 3-set: candidates meeting it in at most one element.
    low_meet: Vec<Bits>,
    blocks: BlockBound,
    constraints: ConstraintSet,
    need: usize,
    j2: Option<SetFamily>,
}

impl Universe {
    fn new(n: usize, k: usize, constraints: &ConstraintSet) -> Result<Universe> {
        if n == 0 || n > 64 {
            return Err(Error::GroundSize(n));
        }
        if k == 0 || k > n {
            return Err(Error::Uniformity { n, k });
        }
        let size = binom(n as i64, k as i64);
        if size > CAPACITY as u128 {
            return Err(Error::UniverseTooLarge(size.min(u64::MAX as u128) as u64));
        }
        let cands: Vec<EdgeMask> = k_subsets(n, k).collect();
        let index: HashMap<u64, usize> = cands.iter().enumerate().map(|(i, e)| (e.0, i)).collect();
        let conflict = cands
            .iter()
            .map(|a| cands.iter().enumerate().filter(|(_, b)| !a.meets(**b)).map(|(i, _)| i).collect())
            .collect();
        let contains: Vec<Bits> = (0..n)
            .map(|x| cands.iter().enumerate().filter(|(_, e)| e.contains(x)).map(|(i, _)| i).collect())
            .collect();
        let all = Bits::full(cands.len());
        let avoid = contains.iter().map(|c| all.and_not(c)).collect();
        let low_meet = if constraints.forbid_g2 {
            k_subsets(n, 3)
                .map(|s| {
                    cands
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| e.intersection(s).len() <= 1)
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        let blocks = BlockBound::build(n, k, &cands, &|e| index.get(&e.0).copied(), BOUND_PARTITIONS);
        let j2 = if constraints.forbid_j2 {
            canonical::build(&CanonicalSpec::j(n, k, 2)).ok()
        } else {
            None
        };
        Ok(Universe {
            n,
            k,
            cands,
            index,
            conflict,
            contains,
            avoid,
            low_meet,
            blocks,
            need: constraints.avoid_need(),
            constraints: constraints.clone(),
            j2,
        })
    }

    fn family(&self, chosen: &Bits) -> SetFamily {
        SetFamily::from_sorted_unchecked(self.n, self.k, chosen.iter().map(|i| self.cands[i]).collect())
    }

    /// Necessary condition for some completion within `pool` to satisfy the
    /// monotone exclusion constraints.
    fn pool_feasible(&self, pool: &Bits) -> bool {
        if self.need > 0 && self.avoid.iter().any(|a| a.and_count(pool) < self.need) {
            return false;
        }
        self.low_meet.iter().all(|l| l.intersects(pool))
    }

    /// Exact admissibility of a complete candidate family.
    fn admits(&self, chosen: &Bits, degrees: &[u16]) -> bool {
        if !self.pool_feasible(chosen) {
            return false;
        }
        if let Some(cap) = self.constraints.max_degree_cap {
            if degrees.iter().any(|&d| d as usize > cap) {
                return false;
            }
        }
        if let Some(j2) = &self.j2 {
            if matches!(embeds_into(&self.family(chosen), j2), Ok(Some(_))) {
                return false;
            }
        }
        true
    }

    /// Requirement not yet met by `chosen`, as the candidates that would
    /// help meet it. Elements come before 3-sets; the tightest wins.
    fn unmet_requirement(&self, chosen: &Bits, avail: &Bits) -> Option<Bits> {
        let mut best: Option<(usize, Bits)> = None;
        if self.need > 0 {
            for a in &self.avoid {
                if a.and_count(chosen) < self.need {
                    let opts = a.and(avail);
                    let c = opts.count();
                    if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                        best = Some((c, opts));
                    }
                }
            }
        }
        if best.is_none() {
            for l in &self.low_meet {
                if !l.intersects(chosen) {
                    let opts = l.and(avail);
                    let c = opts.count();
                    if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                        best = Some((c, opts));
                    }
                }
            }
        }
        best.map(|(_, b)| b)
    }
}

#[derive(Clone)]
struct Node {
    chosen: Bits,
    avail: Bits,
    size: usize,
    degrees: [u16; 64],
    /// Partition of the ground set such that permuting elements inside a
    /// cell maps the node to itself.
    cells: Vec<u64>,
}

impl Node {
    /// Adds candidate `v`; returns `None` if it conflicts with the node.
    fn include(&self, u: &Universe, v: usize) -> Option<Node> {
        let e = u.cands[v];
        if u.conflict[v].intersects(&self.chosen) || self.chosen.contains(v) {
            return None;
        }
        let mut next = self.clone();
        next.chosen.insert(v);
        next.size += 1;
        next.avail = next.avail.and_not(&u.conflict[v]);
        next.avail.remove(v);
        for x in e.elements() {
            next.degrees[x] += 1;
        }
        next.cells = self
            .cells
            .iter()
            .flat_map(|&c| [c & e.0, c & !e.0])
            .filter(|&c| c != 0)
            .collect();
        if let Some(cap) = u.constraints.max_degree_cap {
            for x in e.elements() {
                if next.degrees[x] as usize > cap {
                    return None;
                }
                if next.degrees[x] as usize == cap {
                    next.avail = next.avail.and_not(&u.contains[x]);
                }
            }
        }
        Some(next)
    }

    /// Available candidates in the orbit of `v` under the cell group: those
    /// meeting every cell in as many elements as `v` does.
    fn orbit(&self, u: &Universe, v: usize) -> Bits {
        let e = u.cands[v].0;
        if self.cells.len() == u.n {
            let mut one = Bits::EMPTY;
            one.insert(v);
            return one;
        }
        let profile: Vec<u32> = self.cells.iter().map(|c| (c & e).count_ones()).collect();
        self.avail
            .iter()
            .filter(|&w| {
                let f = u.cands[w].0;
                self.cells.iter().zip(&profile).all(|(c, &p)| (c & f).count_ones() == p)
            })
            .collect()
    }

    /// Drops a whole orbit from the available candidates. The cell group
    /// still fixes the node afterwards.
    fn exclude(&self, orbit: &Bits) -> Node {
        let mut next = self.clone();
        next.avail = next.avail.and_not(orbit);
        next
    }
}

enum Step {
    Prune(PruneReason, usize),
    Leaf(Bits, [u16; 64]),
    Branch(usize),
}

/// Search state local to one task; tasks never share mutable state so the
/// outcome does not depend on how they are scheduled.
struct Worker<'a> {
    u: &'a Universe,
    mode: Mode,
    task: Option<usize>,
    root: usize,
    best: usize,
    /// Maximum families met so far, one per isomorphism class.
    found: Vec<(Vec<usize>, SetFamily)>,
    labelled: u64,
    nodes: u64,
    prunes: PruneCounts,
    log: Vec<PruneRecord>,
    log_limit: usize,
    log_truncated: bool,
    deadline: Option<Instant>,
    aborted: &'a AtomicBool,
}

impl<'a> Worker<'a> {
    fn new(u: &'a Universe, mode: Mode, floor: usize, ctx: &RunContext<'a>) -> Worker<'a> {
        Worker {
            u,
            mode,
            task: None,
            root: 0,
            best: floor,
            found: Vec::new(),
            labelled: 0,
            nodes: 0,
            prunes: PruneCounts::default(),
            log: Vec::new(),
            log_limit: ctx.log_limit,
            log_truncated: false,
            deadline: ctx.deadline,
            aborted: ctx.aborted,
        }
    }

    fn target(&self) -> usize {
        match self.mode {
            Mode::Optimize => self.best + 1,
            Mode::Enumerate => self.best.max(1),
        }
    }

    fn step(&self, node: &Node) -> Step {
        let u = self.u;
        let pool = node.chosen.or(&node.avail);
        if !u.pool_feasible(&pool) {
            return Step::Prune(PruneReason::Constraint, node.size + node.avail.count());
        }
        let avail_count = node.avail.count();
        if avail_count == 0 {
            return Step::Leaf(node.chosen, node.degrees);
        }
        let target = self.target();
        if node.size + avail_count < target {
            return Step::Prune(PruneReason::Bound, node.size + avail_count);
        }
        if let Some(cap) = u.constraints.max_degree_cap {
            let room: usize = node.degrees[..u.n].iter().map(|&d| cap.saturating_sub(d as usize)).sum();
            let ub = node.size + room / u.k;
            if ub < target {
                return Step::Prune(PruneReason::Capacity, ub);
            }
        }
        let ub = node.size + u.blocks.bound_below(&node.avail, target.saturating_sub(node.size));
        if ub < target {
            return Step::Prune(PruneReason::Bound, ub);
        }

        let focus = u.unmet_requirement(&node.chosen, &node.avail).unwrap_or(node.avail);
        let mut pick = None;
        let mut pick_conf = 0usize;
        for v in focus.iter() {
            let c = u.conflict[v].and_count(&node.avail);
            if pick.is_none() || c > pick_conf {
                pick = Some(v);
                pick_conf = c;
            }
        }
        let v = pick.expect("focus is nonempty: pool feasibility guarantees options");
        if pick_conf == 0 && focus == node.avail {
            // All available candidates pairwise intersect.
            let mut degrees = node.degrees;
            for i in node.avail.iter() {
                for x in u.cands[i].elements() {
                    degrees[x] += 1;
                }
            }
            let cap_ok = u.constraints.max_degree_cap.is_none_or(|cap| degrees.iter().all(|&d| d as usize <= cap));
            if cap_ok {
                return Step::Leaf(pool, degrees);
            }
        }
        Step::Branch(v)
    }

    fn record_prune(&mut self, reason: PruneReason, bound: usize, path: &[i32]) {
        match reason {
            PruneReason::Bound => self.prunes.bound += 1,
            PruneReason::Constraint => self.prunes.constraint += 1,
            PruneReason::Capacity => self.prunes.capacity += 1,
        }
        if self.log.len() < self.log_limit {
            self.log.push(PruneRecord {
                task: self.task,
                root: self.root,
                path: path.to_vec(),
                reason,
                bound,
                incumbent: self.best,
            });
        } else {
            self.log_truncated = true;
        }
    }

    fn leaf(&mut self, chosen: Bits, degrees: &[u16]) {
        let size = chosen.count();
        if size < self.target() || !self.u.admits(&chosen, degrees) {
            return;
        }
        if size > self.best {
            self.best = size;
            self.found.clear();
            self.labelled = 0;
        }
        self.labelled += 1;
        if self.found.is_empty() || self.mode == Mode::Enumerate {
            let fam = self.u.family(&chosen);
            let inv = fam.degree_multiset();
            if !self.found.iter().any(|(ri, r)| *ri == inv && are_isomorphic(r, &fam)) {
                self.found.push((inv, fam));
            }
        }
    }

    fn dfs(&mut self, node: &Node, path: &mut Vec<i32>) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        self.nodes += 1;
        if self.nodes & 0x3ff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.aborted.store(true, Ordering::Relaxed);
                    return;
                }
            }
        }
        match self.step(node) {
            Step::Prune(reason, bound) => self.record_prune(reason, bound, path),
            Step::Leaf(chosen, degrees) => self.leaf(chosen, &degrees),
            Step::Branch(v) => {
                if let Some(inc) = node.include(self.u, v) {
                    path.push(v as i32 + 1);
                    self.dfs(&inc, path);
                    path.pop();
                }
                let orbit = node.orbit(self.u, v);
                path.push(-(v as i32) - 1);
                self.dfs(&node.exclude(&orbit), path);
                path.pop();
            }
        }
    }
}

/// Root nodes: `{0..k-1}` always; with non-trivial constraints also one
/// edge avoiding 0 per possible overlap with the first edge.
fn roots(u: &Universe) -> Vec<Vec<EdgeMask>> {
    let k = u.k;
    let first = EdgeMask::prefix(k);
    if u.constraints.forces_nontrivial() && u.n >= 2 * k {
        (1..k)
            .map(|j| {
                let second = EdgeMask::from_elements((1..=j).chain(k..2 * k - j));
                vec![first, second]
            })
            .collect()
    } else {
        vec![vec![first]]
    }
}

const TASK_TARGET: usize = 96;
/// Number of relabelled block partitions the bound minimises over.
const BOUND_PARTITIONS: usize = 4;

struct RunContext<'a> {
    workers: usize,
    log_limit: usize,
    deadline: Option<Instant>,
    aborted: &'a AtomicBool,
}

/// Result of one pass over the whole search space.
struct Pass {
    best: usize,
    found: Vec<(Vec<usize>, SetFamily)>,
    labelled: u64,
    nodes: u64,
    prunes: PruneCounts,
    log: Vec<PruneRecord>,
    log_truncated: bool,
    tasks: Vec<TaskPath>,
}

fn root_nodes(u: &Universe, root_sets: &[Vec<EdgeMask>]) -> Vec<(usize, Node)> {
    let empty = Node {
        chosen: Bits::EMPTY,
        avail: Bits::full(u.cands.len()),
        size: 0,
        degrees: [0; 64],
        cells: vec![EdgeMask::prefix(u.n).0],
    };
    let mut out = Vec::new();
    for (r, sets) in root_sets.iter().enumerate() {
        let mut node = Some(empty.clone());
        for s in sets {
            node = node.and_then(|nd| nd.include(u, u.index[&s.0]));
        }
        if let Some(nd) = node {
            out.push((r, nd));
        }
    }
    out
}

fn search_pass<'a>(u: &'a Universe, mode: Mode, floor: usize, roots: &[(usize, Node)], ctx: &RunContext<'a>) -> Pass {
    // Expand breadth-first into a fixed number of independent tasks. The
    // expansion never depends on the worker count.
    let mut head = Worker::new(u, mode, floor, ctx);
    let mut frontier: Vec<(usize, Vec<i32>, Node)> = roots.iter().map(|(r, nd)| (*r, Vec::new(), nd.clone())).collect();
    let mut tasks: Vec<(usize, Vec<i32>, Node)> = Vec::new();
    while !frontier.is_empty() && tasks.len() + frontier.len() < TASK_TARGET {
        let mut next = Vec::new();
        for (root, path, node) in frontier {
            head.nodes += 1;
            head.root = root;
            match head.step(&node) {
                Step::Prune(reason, bound) => head.record_prune(reason, bound, &path),
                Step::Leaf(chosen, degrees) => head.leaf(chosen, &degrees),
                Step::Branch(v) => {
                    if let Some(inc) = node.include(u, v) {
                        let mut p = path.clone();
                        p.push(v as i32 + 1);
                        next.push((root, p, inc));
                    }
                    let orbit = node.orbit(u, v);
                    let mut p = path;
                    p.push(-(v as i32) - 1);
                    next.push((root, p, node.exclude(&orbit)));
                }
            }
        }
        frontier = next;
    }
    tasks.extend(frontier);

    let start_best = head.best;
    let results: Vec<Worker> = run_tasks(ctx.workers, &tasks, |i, (root, path, node)| {
        let mut w = Worker::new(u, mode, start_best, ctx);
        w.task = Some(i);
        w.root = *root;
        let mut p = path.clone();
        w.dfs(node, &mut p);
        w
    });

    let best = results.iter().map(|w| w.best).max().unwrap_or(0).max(start_best);
    let mut pass = Pass {
        best,
        found: Vec::new(),
        labelled: 0,
        nodes: head.nodes,
        prunes: head.prunes.clone(),
        log: Vec::new(),
        log_truncated: head.log_truncated,
        tasks: tasks.iter().map(|(r, p, _)| TaskPath { root: *r, path: p.clone() }).collect(),
    };
    let merge = |w: Worker, pass: &mut Pass| {
        pass.nodes += w.nodes;
        pass.prunes.bound += w.prunes.bound;
        pass.prunes.constraint += w.prunes.constraint;
        pass.prunes.capacity += w.prunes.capacity;
        if w.best == best {
            pass.labelled += w.labelled;
            for (inv, fam) in w.found {
                if !pass.found.iter().any(|(ri, r)| *ri == inv && are_isomorphic(r, &fam)) {
                    pass.found.push((inv, fam));
                }
            }
        }
        for rec in w.log {
            if pass.log.len() < ctx.log_limit {
                pass.log.push(rec);
            } else {
                pass.log_truncated = true;
            }
        }
        pass.log_truncated |= w.log_truncated;
    };
    merge(head, &mut pass);
    for w in results {
        merge(w, &mut pass);
    }
    pass
}

fn run(n: usize, k: usize, constraints: &ConstraintSet, config: &SearchConfig, mode: Mode) -> Result<SearchOutcome> {
    let start = Instant::now();
    let u = Universe::new(n, k, constraints)?;
    let aborted = AtomicBool::new(false);
    let ctx = RunContext {
        workers: config.workers,
        log_limit: config.log_limit,
        deadline: config.budget.map(|b| start + b),
        aborted: &aborted,
    };
    let root_sets = roots(&u);
    let roots = root_nodes(&u, &root_sets);

    // The best admissible named construction is a sound starting incumbent.
    let seed = CanonicalSpec::all_named(n, k)
        .into_iter()
        .filter_map(|spec| canonical::build(&spec).ok().map(|f| (spec.name(), f)))
        .filter(|(_, f)| !f.is_empty() && constraints.admits(f))
        .max_by(|(_, a), (_, b)| a.len().cmp(&b.len()));
    let floor = seed.as_ref().map_or(0, |(_, f)| f.len());
    let pass = search_pass(&u, mode, floor, &roots, &ctx);
    let complete = !aborted.load(Ordering::Relaxed);
    let mut found = pass.found;
    if pass.best == floor {
        if let Some((_, f)) = &seed {
            let inv = f.degree_multiset();
            if !found.iter().any(|(ri, r)| *ri == inv && are_isomorphic(r, f)) {
                found.push((inv, f.clone()));
            }
        }
    }
    let mut witnesses: Vec<SetFamily> = found.into_iter().map(|(_, f)| f).collect();
    witnesses.sort_by(|a, b| b.degree_multiset().cmp(&a.degree_multiset()).then_with(|| a.cmp(b)));

    let certificate = Certificate {
        proven: complete,
        universe_size: u.cands.len(),
        roots: root_sets.iter().map(|r| r.iter().map(|e| e.to_vec()).collect()).collect(),
        blocks: u.blocks.partitions[0].iter().map(|b| b.members.clone()).collect(),
        blocks_from_cycles: u.blocks.perfect,
        root_bound: u.blocks.root_bound(),
        seed: seed.map(|(name, f)| SeedRecord { name, size: f.len() }),
        tasks: pass.tasks,
        prunes: pass.prunes,
        log: pass.log,
        log_truncated: pass.log_truncated,
    };
    Ok(SearchOutcome {
        n,
        k,
        constraints: constraints.clone(),
        optimum: pass.best,
        complete,
        witnesses,
        labelled_witnesses: pass.labelled as usize,
        explored_nodes: pass.nodes,
        elapsed: start.elapsed(),
        certificate,
    })
}

fn run_tasks<'a, T, F>(workers: usize, tasks: &[T], f: F) -> Vec<Worker<'a>>
where
    T: Sync,
    F: Fn(usize, &T) -> Worker<'a> + Sync + Send,
{
    if workers <= 1 {
        return tasks.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| tasks.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()),
        Err(_) => tasks.iter().enumerate().map(|(i, t)| f(i, t)).collect(),
    }
}

/// One representative per isomorphism class, keeping the first (in the
/// given order) of each class.
pub fn iso_classes(families: Vec<SetFamily>) -> Vec<SetFamily> {
    let mut reps: Vec<(Vec<usize>, SetFamily)> = Vec::new();
    for f in families {
        let inv = f.degree_multiset();
        if !reps.iter().any(|(ri, r)| *ri == inv && are_isomorphic(r, &f)) {
            reps.push((inv, f));
        }
    }
    reps.into_iter().map(|(_, f)| f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SearchConfig {
        SearchConfig::with_budget(Duration::from_secs(60))
    }

    #[test]
    fn parse_forbid_list() {
        let c = ConstraintSet::parse_forbid("trivial, hm,g2").unwrap();
        assert!(c.forbid_trivial && c.forbid_hm && c.forbid_g2 && !c.forbid_j2);
        assert!(ConstraintSet::parse_forbid("bogus").is_err());
    }

    #[test]
    fn small_ekr() {
        let out = enumerate_maximum(5, 2, &ConstraintSet::none(), &cfg()).unwrap();
        assert!(out.complete);
        assert_eq!(out.optimum, 4);
        assert_eq!(out.witnesses.len(), 1);
    }

    #[test]
    fn triangle_is_the_only_nontrivial_graph() {
        let out = enumerate_maximum(6, 2, &ConstraintSet::non_trivial(), &cfg()).unwrap();
        assert_eq!(out.optimum, 3);
        assert_eq!(out.witnesses.len(), 1);
        assert_eq!(out.witnesses[0].is_trivial(), Ok(None));
    }

    #[test]
    fn infeasible_constraints_give_zero() {
        // Every intersecting graph is a star or a triangle, both HM.
        let out = max_family(6, 2, &ConstraintSet::beyond_hm(2), &cfg()).unwrap();
        assert!(out.complete);
        assert_eq!(out.optimum, 0);
        assert!(out.witnesses.is_empty());
    }

    #[test]
    fn universe_limit() {
        assert!(matches!(
            max_family(12, 6, &ConstraintSet::none(), &cfg()),
            Err(Error::UniverseTooLarge(924))
        ));
    }

    #[test]
    fn admits_checks_each_constraint() {
        let star = canonical::build(&CanonicalSpec::star(7, 3)).unwrap();
        let hm = canonical::build(&CanonicalSpec::hilton_milner(7, 3)).unwrap();
        let j2 = canonical::build(&CanonicalSpec::j(7, 3, 2)).unwrap();
        let t = canonical::build(&CanonicalSpec::triangle(7, 3)).unwrap();
        assert!(ConstraintSet::none().admits(&star));
        assert!(!ConstraintSet::non_trivial().admits(&star));
        assert!(ConstraintSet::non_trivial().admits(&hm));
        assert!(!ConstraintSet::beyond_hm(3).admits(&hm));
        assert!(ConstraintSet::beyond_hm(3).admits(&j2));
        assert!(!ConstraintSet::beyond_hm(3).admits(&t));
        assert!(!ConstraintSet::with_cap(14).admits(&star));
    }
}
