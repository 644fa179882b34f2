//! The shift operator `S_xy`, stabilization (plain and with a growing
//! exclusion set), shift preimages, and the window profile `A_i`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{k_subsets, EdgeMask, ElementSet, SetFamily};
use crate::separability::{ordered_cross_intersecting_partitions, SetSystem};

fn check_pair(x: usize, y: usize) -> Result<()> {
    if x >= y {
        return Err(Error::ShiftOrder { x, y });
    }
    Ok(())
}

/// `S_xy(E) = (E \ {y}) ∪ {x}` when `x ∉ E`, `y ∈ E` and the image is not
/// already an edge; otherwise `E`.
pub fn shift_edge(fam: &SetFamily, e: EdgeMask, x: usize, y: usize) -> Result<EdgeMask> {
    check_pair(x, y)?;
    if !fam.contains(e) {
        return Err(Error::NotAMember(e.to_string()));
    }
    Ok(shift_member(fam, e, x, y))
}

#[inline]
fn shift_member(fam: &SetFamily, e: EdgeMask, x: usize, y: usize) -> EdgeMask {
    if e.contains(x) || !e.contains(y) {
        return e;
    }
    let image = e.without(y).with(x);
    if fam.contains(image) {
        e
    } else {
        image
    }
}

pub fn shift_family(fam: &SetFamily, x: usize, y: usize) -> Result<SetFamily> {
    check_pair(x, y)?;
    if y >= fam.n() {
        return Ok(fam.clone());
    }
    Ok(shift_unchecked(fam, x, y).0)
}

/// Image family and number of edges that moved.
fn shift_unchecked(fam: &SetFamily, x: usize, y: usize) -> (SetFamily, usize) {
    let mut changed = 0;
    let mut edges: Vec<EdgeMask> = fam
        .edges()
        .iter()
        .map(|&e| {
            let s = shift_member(fam, e, x, y);
            if s != e {
                changed += 1;
            }
            s
        })
        .collect();
    if changed == 0 {
        return (fam.clone(), 0);
    }
    edges.sort_unstable();
    (SetFamily::from_sorted_unchecked(fam.n(), fam.k(), edges), changed)
}

/// Sum over edges of the sum of their elements. Every shift that moves an
/// edge lowers it by `y - x > 0` per moved edge.
pub fn potential(fam: &SetFamily) -> u64 {
    fam.edges().iter().map(|e| e.element_sum()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedShift {
    pub x: usize,
    pub y: usize,
    pub changed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardEvent {
    pub x: usize,
    pub y: usize,
    /// What `S_xy` would have produced; the shift was not applied.
    pub outcome: ShiftOutcome,
    /// Elements added to the exclusion set.
    pub added: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftTrace {
    pub initial: SetFamily,
    /// Every attempted shift in order, including those that moved nothing.
    pub applied: Vec<AppliedShift>,
    /// Elements never shifted (final value, for guarded runs).
    pub exclusion: Vec<usize>,
    #[serde(rename = "final")]
    pub final_family: SetFamily,
    /// Potential before the first shift and after each entry of `applied`.
    pub potential_history: Vec<u64>,
    /// Refused shifts of a guarded run.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub guard_events: Vec<GuardEvent>,
}

impl ShiftTrace {
    fn start(fam: &SetFamily) -> ShiftTrace {
        ShiftTrace {
            initial: fam.clone(),
            applied: Vec::new(),
            exclusion: Vec::new(),
            final_family: fam.clone(),
            potential_history: vec![potential(fam)],
            guard_events: Vec::new(),
        }
    }

    fn record(&mut self, x: usize, y: usize, next: SetFamily, changed: usize) {
        self.applied.push(AppliedShift { x, y, changed });
        if changed > 0 {
            self.final_family = next;
        }
        self.potential_history.push(potential(&self.final_family));
    }

    /// Number of full passes over the admissible pairs.
    pub fn passes(&self) -> usize {
        let n = self.initial.n();
        let excl = EdgeMask::from_elements(self.exclusion.iter().copied());
        let free = n - excl.intersection(EdgeMask::prefix(n)).len();
        let per_pass = free * free.saturating_sub(1) / 2;
        if per_pass == 0 {
            0
        } else {
            self.applied.len().div_ceil(per_pass)
        }
    }
}

fn free_pairs(n: usize, exclusion: ElementSet) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if !exclusion.contains(x) && !exclusion.contains(y) {
                pairs.push((x, y));
            }
        }
    }
    pairs
}

/// Applies `S_xy` for all `x < y` outside `exclusion` in ascending
/// lexicographic passes until a full pass moves nothing.
pub fn stabilize(fam: &SetFamily, exclusion: ElementSet) -> ShiftTrace {
    let mut trace = ShiftTrace::start(fam);
    trace.exclusion = exclusion.intersection(EdgeMask::prefix(fam.n())).to_vec();
    let pairs = free_pairs(fam.n(), exclusion);
    loop {
        let mut moved = false;
        for &(x, y) in &pairs {
            let (next, changed) = shift_unchecked(&trace.final_family, x, y);
            moved |= changed > 0;
            trace.record(x, y, next, changed);
        }
        if !moved {
            return trace;
        }
    }
}

/// True when `S_xy(fam) = fam` for every admissible pair.
pub fn is_stable(fam: &SetFamily, exclusion: ElementSet) -> bool {
    free_pairs(fam.n(), exclusion).iter().all(|&(x, y)| shift_unchecked(fam, x, y).1 == 0)
}

/// Elements `x` avoided by at most one edge, i.e. the family is EKR or HM
/// at `x`.
pub fn hm_or_ekr_centers(fam: &SetFamily) -> ElementSet {
    EdgeMask::from_elements((0..fam.n()).filter(|&x| fam.avoiding(x) <= 1))
}

/// 3-sets `S` with `|E ∩ S| >= 2` for every edge `E`, i.e. `fam ⊆ T(S)`.
pub fn hm_triples(fam: &SetFamily) -> Vec<EdgeMask> {
    if fam.n() < 3 {
        return Vec::new();
    }
    k_subsets(fam.n(), 3)
        .filter(|&s| fam.edges().iter().all(|e| e.intersection(s).len() >= 2))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftOutcome {
    /// `S_xy` moves nothing.
    Stable,
    /// `S_xy` moves edges and the image is still neither EKR nor HM.
    Changed,
    BecomesEkr { center: usize },
    BecomesHm { center: usize },
    /// Only reported for `k = 3`.
    BecomesHmAtTriple { triple: [usize; 3] },
}

/// Whether a family is outside every star and every `F(F, x)`, and for
/// `k = 3` outside every `T(S)`.
pub fn beyond_hm(fam: &SetFamily) -> bool {
    hm_or_ekr_centers(fam).is_empty() && (fam.k() != 3 || hm_triples(fam).is_empty())
}

/// Describes `S_xy(fam)` for a family that is intersecting and neither
/// EKR nor HM at any element (and, for `k = 3`, not HM at any 3-set).
pub fn classify_shift_outcome(fam: &SetFamily, x: usize, y: usize) -> Result<ShiftOutcome> {
    check_pair(x, y)?;
    if !fam.is_intersecting() {
        return Err(Error::Precondition("family is not intersecting".into()));
    }
    if !beyond_hm(fam) {
        return Err(Error::Precondition("family is already EKR or HM".into()));
    }
    if y >= fam.n() {
        return Ok(ShiftOutcome::Stable);
    }
    let (image, changed) = shift_unchecked(fam, x, y);
    if changed == 0 {
        return Ok(ShiftOutcome::Stable);
    }
    Ok(outcome_of_image(&image))
}

fn outcome_of_image(image: &SetFamily) -> ShiftOutcome {
    if let Some(center) = hm_or_ekr_centers(image).min_element() {
        return if image.avoiding(center) == 0 {
            ShiftOutcome::BecomesEkr { center }
        } else {
            ShiftOutcome::BecomesHm { center }
        };
    }
    if image.k() == 3 {
        if let Some(t) = hm_triples(image).first() {
            let v = t.to_vec();
            return ShiftOutcome::BecomesHmAtTriple { triple: [v[0], v[1], v[2]] };
        }
    }
    ShiftOutcome::Changed
}

/// Elements added to the exclusion set when `S_xy` would produce `outcome`.
fn guard_witnesses(fam: &SetFamily, image_outcome: &ShiftOutcome, x: usize, y: usize) -> Vec<usize> {
    let mut add = vec![x, y];
    match image_outcome {
        ShiftOutcome::BecomesHm { center } => {
            // The single edge of the image avoiding the center, minus y.
            let image = shift_unchecked(fam, x, y).0;
            if let Some(e0) = image.edges().iter().find(|e| !e.contains(*center)) {
                let want = if fam.k() == 3 { 2 } else { 1 };
                add.extend(e0.elements().filter(|&z| z != y && z != x).take(want));
            }
        }
        ShiftOutcome::BecomesHmAtTriple { triple } => {
            add.extend(triple.iter().copied().filter(|&z| z != x && z != y));
        }
        _ => {}
    }
    add.sort_unstable();
    add.dedup();
    add
}

/// Stabilization that refuses any shift turning the family EKR, HM, or (for
/// `k = 3`) HM at a 3-set. On a refusal, `x`, `y` and up to two witness
/// elements join the exclusion set and the passes restart from the current
/// family:
///
/// * EKR at `x`: `{x, y}`;
/// * HM at `x`: `{x, y, z1}` (`k >= 4`) or `{x, y, z1, z2}` (`k = 3`), with
///   `z_i` from the one image edge avoiding `x`;
/// * HM at `{x, x1, x2}`: `{x, y, x1, x2}`.
pub fn stabilize_guarded(fam: &SetFamily, exclusion: ElementSet) -> Result<ShiftTrace> {
    if !fam.is_intersecting() {
        return Err(Error::Precondition("family is not intersecting".into()));
    }
    if !beyond_hm(fam) {
        return Err(Error::Hypothesis("family is already EKR or HM".into()));
    }
    let n = fam.n();
    let mut excl = exclusion.intersection(EdgeMask::prefix(n));
    let mut trace = ShiftTrace::start(fam);
    'restart: loop {
        let pairs = free_pairs(n, excl);
        loop {
            let mut moved = false;
            for &(x, y) in &pairs {
                let (next, changed) = shift_unchecked(&trace.final_family, x, y);
                if changed > 0 {
                    let outcome = outcome_of_image(&next);
                    if outcome != ShiftOutcome::Changed {
                        let added = guard_witnesses(&trace.final_family, &outcome, x, y);
                        excl = added.iter().fold(excl, |m, &z| m.with(z));
                        trace.guard_events.push(GuardEvent { x, y, outcome, added });
                        continue 'restart;
                    }
                }
                moved |= changed > 0;
                trace.record(x, y, next, changed);
            }
            if !moved {
                trace.exclusion = excl.to_vec();
                return Ok(trace);
            }
        }
    }
}

/// The window used in the counting argument: the exclusion set together
/// with the first `2k - |X|` elements outside it (`k >= 4`), or the first
/// `7 - |X|` elements outside it (`k = 3`).
pub fn counting_window(n: usize, k: usize, exclusion: ElementSet) -> ElementSet {
    let excl = exclusion.intersection(EdgeMask::prefix(n));
    let size = if k == 3 { 7 } else { 2 * k };
    let extra = size.saturating_sub(excl.len());
    let rest = (0..n).filter(|&v| !excl.contains(v)).take(extra);
    rest.fold(excl, |m, v| m.with(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AiProfile {
    pub window: Vec<usize>,
    /// `i -> |A_i|` for `1 <= i <= k`.
    pub counts: BTreeMap<usize, usize>,
    /// `i -> A_i`, each class sorted by mask value.
    pub classes: BTreeMap<usize, Vec<EdgeMask>>,
    /// Whether `A_1 ∪ ... ∪ A_k ∪ fam` is intersecting.
    pub union_intersecting: bool,
}

/// `A_i = { E ∩ Y : E ∈ fam, |E ∩ Y| = i }` for the window `Y`.
pub fn ai_profile(fam: &SetFamily, window: ElementSet) -> AiProfile {
    let y = window.intersection(EdgeMask::prefix(fam.n()));
    let mut classes: BTreeMap<usize, Vec<EdgeMask>> = (1..=fam.k()).map(|i| (i, Vec::new())).collect();
    for e in fam.edges() {
        let part = e.intersection(y);
        if let Some(class) = classes.get_mut(&part.len()) {
            class.push(part);
        }
    }
    for class in classes.values_mut() {
        class.sort_unstable();
        class.dedup();
    }
    let counts = classes.iter().map(|(&i, c)| (i, c.len())).collect();
    let mut all: Vec<EdgeMask> = classes.values().flatten().copied().collect();
    all.extend_from_slice(fam.edges());
    let union_intersecting = all.iter().enumerate().all(|(i, a)| all[i + 1..].iter().all(|b| a.meets(*b)));
    AiProfile { window: y.to_vec(), counts, classes, union_intersecting }
}

/// Every pair of edges meets inside `window`.
pub fn window_intersecting(fam: &SetFamily, window: ElementSet) -> bool {
    let parts: Vec<EdgeMask> = fam.edges().iter().map(|e| e.intersection(window)).collect();
    parts.iter().enumerate().all(|(i, a)| parts[i + 1..].iter().all(|b| a.meets(*b)))
}

/// The edges of `target` that a shift could have produced from a set
/// containing `y`: `B_x = {E : x ∈ E, y ∉ E, (E \ {x}) ∪ {y} ∉ target}`.
pub fn movable_edges(target: &SetFamily, x: usize, y: usize) -> Vec<EdgeMask> {
    target
        .edges()
        .iter()
        .copied()
        .filter(|e| e.contains(x) && !e.contains(y) && !target.contains(e.without(x).with(y)))
        .collect()
}

/// All intersecting families `H` with `S_xy(H) = target`, sorted. Empty
/// when `target` is not in the image of `S_xy`.
///
/// A preimage keeps `target \ B_x` and returns each `B ∈ {E \ {x} : E ∈ B_x}`
/// either to `B ∪ {y}` (side 1) or to `B ∪ {x}` (side 2). The two sides
/// must be cross-intersecting, so only splits along components of the
/// disjointness graph of `B` are tried.
pub fn enumerate_shift_preimages(target: &SetFamily, x: usize, y: usize) -> Result<Vec<SetFamily>> {
    check_pair(x, y)?;
    if y >= target.n() {
        return Ok(vec![target.clone()]);
    }
    let bx = movable_edges(target, x, y);
    let kept: Vec<EdgeMask> = target.edges().iter().copied().filter(|e| !bx.contains(e)).collect();
    let b = SetSystem::new(target.n(), bx.iter().map(|e| e.without(x)).collect())?;
    let mut out = Vec::new();
    for split in ordered_cross_intersecting_partitions(&b)? {
        let mut edges = kept.clone();
        for (i, set) in b.sets().iter().enumerate() {
            edges.push(if split.first.contains(&i) { set.with(y) } else { set.with(x) });
        }
        let h = SetFamily::new(target.n(), target.k(), edges)?;
        if h.is_intersecting() && shift_unchecked(&h, x, y).0 == *target {
            out.push(h);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{build, CanonicalSpec};
    use crate::family::are_isomorphic;

    fn fam(n: usize, k: usize, edges: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, k, edges).unwrap()
    }

    #[test]
    fn shift_edge_examples() {
        let f = fam(4, 3, &[&[1, 2, 3]]);
        let e = EdgeMask::from_elements([1, 2, 3]);
        assert_eq!(shift_edge(&f, e, 0, 1).unwrap(), EdgeMask::from_elements([0, 2, 3]));
        let g = fam(4, 3, &[&[1, 2, 3], &[0, 2, 3]]);
        assert_eq!(shift_edge(&g, e, 0, 1).unwrap(), e);
        let h = fam(4, 3, &[&[0, 2, 3]]);
        let e2 = EdgeMask::from_elements([0, 2, 3]);
        assert_eq!(shift_edge(&h, e2, 0, 1).unwrap(), e2);
        assert!(matches!(shift_edge(&f, e, 1, 1), Err(Error::ShiftOrder { .. })));
        assert!(matches!(shift_edge(&f, e2, 0, 1), Err(Error::NotAMember(_))));
    }

    #[test]
    fn shift_family_examples() {
        let f = fam(4, 3, &[&[1, 2, 3]]);
        assert_eq!(shift_family(&f, 0, 1).unwrap(), fam(4, 3, &[&[0, 2, 3]]));
        let star = build(&CanonicalSpec::star(7, 3)).unwrap();
        assert_eq!(shift_family(&star, 0, 1).unwrap(), star);
        assert!(shift_family(&star, 2, 1).is_err());
    }

    #[test]
    fn stabilize_star_is_immediate() {
        let star = build(&CanonicalSpec::star(7, 3)).unwrap();
        let t = stabilize(&star, EdgeMask::EMPTY);
        assert_eq!(t.final_family, star);
        assert!(t.applied.iter().all(|a| a.changed == 0));
        assert_eq!(t.passes(), 1);
    }

    #[test]
    fn stabilize_respects_exclusion() {
        let j2 = build(&CanonicalSpec::j(7, 3, 2)).unwrap();
        let excl = EdgeMask::from_elements([0, 3]);
        let t = stabilize(&j2, excl);
        assert!(t.applied.iter().all(|a| a.x < a.y && !excl.contains(a.x) && !excl.contains(a.y)));
        assert!(is_stable(&t.final_family, excl));
        assert_eq!(t.exclusion, vec![0, 3]);
    }

    #[test]
    fn centers_and_triples() {
        let star = build(&CanonicalSpec::star(7, 3)).unwrap();
        assert!(hm_or_ekr_centers(&star).contains(0));
        let hm = build(&CanonicalSpec::hilton_milner(7, 3)).unwrap();
        assert!(hm_or_ekr_centers(&hm).contains(0));
        let j2 = build(&CanonicalSpec::j(7, 3, 2)).unwrap();
        assert!(hm_or_ekr_centers(&j2).is_empty());
        assert!(hm_triples(&j2).is_empty());
        let t = build(&CanonicalSpec::triangle(7, 3)).unwrap();
        assert!(hm_triples(&t).contains(&EdgeMask::from_elements([0, 1, 2])));
        let triangle = fam(5, 2, &[&[0, 1], &[0, 2], &[1, 2]]);
        assert_eq!(hm_triples(&triangle), vec![EdgeMask::from_elements([0, 1, 2])]);
    }

    #[test]
    fn classify_requires_hypotheses() {
        let star = build(&CanonicalSpec::star(7, 3)).unwrap();
        assert!(classify_shift_outcome(&star, 0, 1).is_err());
        let j2 = build(&CanonicalSpec::j(7, 3, 2)).unwrap();
        assert!(classify_shift_outcome(&j2, 0, 1).is_ok());
    }

    #[test]
    fn profile_full_window() {
        let j2 = build(&CanonicalSpec::j(7, 3, 2)).unwrap();
        let p = ai_profile(&j2, EdgeMask::prefix(7));
        assert_eq!(p.counts[&3], j2.len());
        assert_eq!(p.counts[&1], 0);
        assert_eq!(p.counts[&2], 0);
        assert!(p.union_intersecting);
    }

    #[test]
    fn window_intersecting_examples() {
        let f = fam(5, 3, &[&[0, 1, 2], &[0, 3, 4]]);
        assert!(window_intersecting(&f, EdgeMask::prefix(5)));
        assert!(!window_intersecting(&f, EdgeMask::from_elements([1, 2, 3, 4])));
    }

    #[test]
    fn window_helper() {
        assert_eq!(counting_window(9, 4, EdgeMask::EMPTY).to_vec(), (0..8).collect::<Vec<_>>());
        assert_eq!(counting_window(10, 3, EdgeMask::from_elements([5, 8])).to_vec(), vec![0, 1, 2, 3, 4, 5, 8]);
    }

    #[test]
    fn trivial_shift_has_one_preimage() {
        let star = build(&CanonicalSpec::star(7, 3)).unwrap();
        assert!(movable_edges(&star, 1, 2).is_empty());
        assert_eq!(enumerate_shift_preimages(&star, 1, 2).unwrap(), vec![star.clone()]);
        // Shifting the star at 1 onto 0 is not trivial.
        let pre = enumerate_shift_preimages(&star, 0, 1).unwrap();
        assert_eq!(pre.len(), 2);
        assert!(pre.iter().all(|h| are_isomorphic(h, &star)));
    }

    #[test]
    fn unstable_target_has_no_preimage() {
        // {2,3,4} would move to {1,2,4}, so J2 is not an image of S_13.
        let j2 = build(&CanonicalSpec::j(7, 3, 2)).unwrap();
        assert!(movable_edges(&j2, 1, 3).is_empty());
        assert!(enumerate_shift_preimages(&j2, 1, 3).unwrap().is_empty());
    }
}
