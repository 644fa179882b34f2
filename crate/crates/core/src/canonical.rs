//! Named extremal families and the closed-form bounds they attain.
//!
//! Sizes of `G_i` and `J_i` for general `i` are obtained by building the
//! family and counting; only the bounds below have closed forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{EdgeMask, SetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Placement {
    /// All k-sets containing `center`.
    Star { center: usize },
    /// `{F} ∪ {G : center ∈ G, G ∩ F ≠ ∅}` with `center ∉ F`.
    HiltonMilner { f: EdgeMask, center: usize },
    /// All k-sets meeting the 3-set `s` in at least two elements.
    Triangle3Set { s: EdgeMask },
    /// `G(E, x0)` for an i-set `E` (2 ≤ i ≤ k) and `x0 ∉ E`.
    G { e: EdgeMask, x0: usize },
    /// `J(E, J, x0)` for a (k−1)-set `E`, an (i+1)-set `J` disjoint from
    /// `E` (1 ≤ i ≤ k−1) and `x0 ∈ J`.
    J { e: EdgeMask, j: EdgeMask, x0: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalSpec {
    pub n: usize,
    pub k: usize,
    pub placement: Placement,
}

impl CanonicalSpec {
    pub fn star(n: usize, k: usize) -> CanonicalSpec {
        CanonicalSpec { n, k, placement: Placement::Star { center: 0 } }
    }

    /// `F = {1..k}`, center 0.
    pub fn hilton_milner(n: usize, k: usize) -> CanonicalSpec {
        let f = EdgeMask::from_elements(1..=k);
        CanonicalSpec { n, k, placement: Placement::HiltonMilner { f, center: 0 } }
    }

    /// `S = {0,1,2}`.
    pub fn triangle(n: usize, k: usize) -> CanonicalSpec {
        CanonicalSpec { n, k, placement: Placement::Triangle3Set { s: EdgeMask::prefix(3) } }
    }

    /// `G_i` with `E = {1..i}`, `x0 = 0`.
    pub fn g(n: usize, k: usize, i: usize) -> CanonicalSpec {
        let e = EdgeMask::from_elements(1..=i);
        CanonicalSpec { n, k, placement: Placement::G { e, x0: 0 } }
    }

    /// `J_i` with `E = {3..k+1}`, `J` the lowest `i+1` elements outside `E`,
    /// `x0 = 0`.
    pub fn j(n: usize, k: usize, i: usize) -> CanonicalSpec {
        let e = EdgeMask::from_elements(3..k + 2);
        let j = EdgeMask::from_elements((0..n).filter(|v| !e.contains(*v)).take(i + 1));
        CanonicalSpec { n, k, placement: Placement::J { e, j, x0: 0 } }
    }

    /// Every named construction with its default placement that is valid
    /// at `(n, k)`: star, HM, `T(S)`, `G_2..G_k`, `J_1..J_{k-1}`.
    pub fn all_named(n: usize, k: usize) -> Vec<CanonicalSpec> {
        let mut specs = vec![CanonicalSpec::star(n, k), CanonicalSpec::hilton_milner(n, k), CanonicalSpec::triangle(n, k)];
        specs.extend((2..=k).map(|i| CanonicalSpec::g(n, k, i)));
        specs.extend((1..k).map(|i| CanonicalSpec::j(n, k, i)));
        specs.retain(|s| s.check().is_ok());
        specs
    }

    fn check(&self) -> Result<()> {
        let (n, k) = (self.n, self.k);
        if n == 0 || n > crate::family::MAX_GROUND {
            return Err(Error::GroundSize(n));
        }
        if k == 0 || k > n {
            return Err(Error::Uniformity { n, k });
        }
        let ground = EdgeMask::prefix(n);
        let bad = |msg: String| Err(Error::InvalidPlacement(msg));
        let inside = |m: EdgeMask| m.is_subset_of(ground);
        match self.placement {
            Placement::Star { center } => {
                if center >= n {
                    return bad(format!("center {center} outside ground set"));
                }
            }
            Placement::HiltonMilner { f, center } => {
                if f.len() != k || !inside(f) {
                    return bad(format!("F={f} must be a k-subset of the ground set"));
                }
                if center >= n || f.contains(center) {
                    return bad(format!("center {center} must lie outside F"));
                }
                if n < k + 1 {
                    return bad("ground set too small".into());
                }
            }
            Placement::Triangle3Set { s } => {
                if s.len() != 3 || !inside(s) {
                    return bad(format!("S={s} must be a 3-subset of the ground set"));
                }
                if k < 2 {
                    return bad("k must be at least 2".into());
                }
            }
            Placement::G { e, x0 } => {
                let i = e.len();
                if !(2..=k).contains(&i) || !inside(e) {
                    return bad(format!("E={e} must have size in 2..={k}"));
                }
                if x0 >= n || e.contains(x0) {
                    return bad(format!("x0={x0} must lie outside E"));
                }
            }
            Placement::J { e, j, x0 } => {
                let i = j.len().saturating_sub(1);
                if e.len() + 1 != k || !inside(e) {
                    return bad(format!("E={e} must have size k-1={}", k - 1));
                }
                if !(1..k).contains(&i) || !inside(j) || j.meets(e) {
                    return bad(format!("J={j} must be an (i+1)-set disjoint from E with 1 <= i <= k-1"));
                }
                if !j.contains(x0) {
                    return bad(format!("x0={x0} must lie in J"));
                }
            }
        }
        Ok(())
    }

    /// The subscript `i` for `G_i` / `J_i` placements.
    pub fn index(&self) -> Option<usize> {
        match self.placement {
            Placement::G { e, .. } => Some(e.len()),
            Placement::J { j, .. } => Some(j.len() - 1),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self.placement {
            Placement::Star { .. } => "F0".into(),
            Placement::HiltonMilner { .. } => "F1".into(),
            Placement::Triangle3Set { .. } => "G2".into(),
            Placement::G { e, .. } => format!("G{}", e.len()),
            Placement::J { j, .. } => format!("J{}", j.len() - 1),
        }
    }
}

pub fn build(spec: &CanonicalSpec) -> Result<SetFamily> {
    spec.check()?;
    let (n, k) = (spec.n, spec.k);
    match spec.placement {
        Placement::Star { center } => SetFamily::from_predicate(n, k, |g| g.contains(center)),
        Placement::HiltonMilner { f, center } => {
            SetFamily::from_predicate(n, k, |g| g == f || (g.contains(center) && g.meets(f)))
        }
        Placement::Triangle3Set { s } => SetFamily::from_predicate(n, k, |g| g.intersection(s).len() >= 2),
        Placement::G { e, x0 } => {
            SetFamily::from_predicate(n, k, |g| e.is_subset_of(g) || (g.contains(x0) && g.meets(e)))
        }
        Placement::J { e, j, x0 } => SetFamily::from_predicate(n, k, |g| {
            (e.is_subset_of(g) && g.meets(j)) || j.is_subset_of(g) || (g.contains(x0) && g.meets(e))
        }),
    }
}

/// Binomial coefficient with `C(n, r) = 0` outside `0 <= r <= n`.
pub fn binom(n: i64, r: i64) -> u128 {
    if n < 0 || r < 0 || r > n {
        return 0;
    }
    let r = r.min(n - r) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn to_count(v: i128, what: &str) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Hypothesis(format!("{what} evaluates outside the count range: {v}")))
}

pub fn ekr_bound(n: usize, k: usize) -> Result<u64> {
    if k < 1 || n < 2 * k {
        return Err(Error::Hypothesis(format!("EKR needs n >= 2k >= 2, got n={n}, k={k}")));
    }
    to_count(binom(n as i64 - 1, k as i64 - 1) as i128, "EKR bound")
}

pub fn hm_bound(n: usize, k: usize) -> Result<u64> {
    if k < 2 || n <= 2 * k {
        return Err(Error::Hypothesis(format!("HM needs n > 2k and k >= 2, got n={n}, k={k}")));
    }
    let (n, k) = (n as i64, k as i64);
    let v = binom(n - 1, k - 1) as i128 - binom(n - k - 1, k - 1) as i128 + 1;
    to_count(v, "HM bound")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hm2Case {
    /// `2 < k <= s + 2`
    Small,
    /// `k <= 2` or `k >= s + 2`
    Large,
}

/// The two branches of the degree-condition bound, evaluated unconditionally.
pub fn hm2_small_case(n: usize, k: usize, _s: usize) -> u64 {
    let (n, k) = (n as i64, k as i64);
    let v = binom(n - 1, k - 1) as i128 - binom(n - k, k - 1) as i128 + (n - k) as i128;
    v.max(0) as u64
}

pub fn hm2_large_case(n: usize, k: usize, s: usize) -> u64 {
    let (n, k, s) = (n as i64, k as i64, s as i64);
    let v = binom(n - 1, k - 1) as i128 - binom(n - k, k - 1) as i128 + binom(n - k - s, k - s - 1) as i128
        + s as i128;
    v.max(0) as u64
}

/// Upper bound on an intersecting family in which every `m − s + 1` edges
/// have empty common intersection. When both branches apply
/// (`k = s + 2 > 2`) they coincide, which is checked here.
pub fn hm2_bound(n: usize, k: usize, s: usize) -> Result<(u64, Hm2Case)> {
    if k < s.min(3) || 2 * k > n || k == 0 {
        return Err(Error::Hypothesis(format!("needs min(3,s) <= k <= n/2, got n={n}, k={k}, s={s}")));
    }
    let small = k > 2 && k <= s + 2;
    let large = k <= 2 || k >= s + 2;
    match (small, large) {
        (true, true) => {
            let (a, b) = (hm2_small_case(n, k, s), hm2_large_case(n, k, s));
            if a != b {
                return Err(Error::Hypothesis(format!("overlapping branches disagree: {a} vs {b}")));
            }
            Ok((a, Hm2Case::Large))
        }
        (true, false) => Ok((hm2_small_case(n, k, s), Hm2Case::Small)),
        (false, true) => Ok((hm2_large_case(n, k, s), Hm2Case::Large)),
        (false, false) => unreachable!("the two branch conditions cover every k"),
    }
}

/// Maximum size of an intersecting family that is neither EKR nor HM
/// (and, for k = 3, not inside a `G_2`).
pub fn main_bound(n: usize, k: usize) -> Result<u64> {
    if k < 3 || n <= 2 * k {
        return Err(Error::Hypothesis(format!("needs n > 2k and k >= 3, got n={n}, k={k}")));
    }
    let (ni, ki) = (n as i64, k as i64);
    let v = binom(ni - 1, ki - 1) as i128 - binom(ni - ki - 1, ki - 1) as i128 - binom(ni - ki - 2, ki - 2) as i128
        + 2;
    let v = to_count(v, "main bound")?;
    if k == 3 {
        assert_eq!(v, 2 * n as u64 - 2, "k = 3 value must equal 2n - 2");
    }
    Ok(v)
}

/// Every subfamily of more than `m − s` edges has empty total intersection.
/// Checked through the equivalent degree form `max_degree <= m − s`.
pub fn s_cover_condition(fam: &SetFamily, s: usize) -> bool {
    let m = fam.len();
    if s > m {
        return fam.max_degree() == 0;
    }
    fam.max_degree() <= m - s
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundsReport {
    pub n: usize,
    pub k: usize,
    pub ekr: Option<u64>,
    pub hm: Option<u64>,
    pub hm2: Option<Hm2Report>,
    pub main: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Hm2Report {
    pub s: usize,
    pub value: u64,
    pub case: Hm2Case,
    pub small_case_expression: u64,
    pub large_case_expression: u64,
}

/// All four bounds for `(n, k)`; inapplicable ones are `None`.
pub fn bounds_report(n: usize, k: usize, s: usize) -> BoundsReport {
    BoundsReport {
        n,
        k,
        ekr: ekr_bound(n, k).ok(),
        hm: hm_bound(n, k).ok(),
        hm2: hm2_bound(n, k, s).ok().map(|(value, case)| Hm2Report {
            s,
            value,
            case,
            small_case_expression: hm2_small_case(n, k, s),
            large_case_expression: hm2_large_case(n, k, s),
        }),
        main: main_bound(n, k).ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{are_isomorphic, k_subsets};

    #[test]
    fn default_placements() {
        let j2 = CanonicalSpec::j(7, 3, 2);
        assert_eq!(
            j2.placement,
            Placement::J { e: EdgeMask::from_elements([3, 4]), j: EdgeMask::from_elements([0, 1, 2]), x0: 0 }
        );
        let j3 = CanonicalSpec::j(9, 4, 3);
        assert_eq!(
            j3.placement,
            Placement::J { e: EdgeMask::from_elements([3, 4, 5]), j: EdgeMask::from_elements([0, 1, 2, 6]), x0: 0 }
        );
        let j1 = CanonicalSpec::j(9, 4, 1);
        assert_eq!(j1.placement, Placement::J { e: EdgeMask::from_elements([3, 4, 5]), j: EdgeMask::prefix(2), x0: 0 });
        assert_eq!(CanonicalSpec::g(9, 4, 3).placement, Placement::G { e: EdgeMask::from_elements([1, 2, 3]), x0: 0 });
    }

    #[test]
    fn build_sizes() {
        assert_eq!(build(&CanonicalSpec::star(7, 3)).unwrap().len(), 15);
        assert_eq!(build(&CanonicalSpec::hilton_milner(7, 3)).unwrap().len(), 13);
        assert_eq!(build(&CanonicalSpec::j(7, 3, 2)).unwrap().len(), 12);
        let g2 = build(&CanonicalSpec::g(9, 4, 2)).unwrap();
        let t3 = build(&CanonicalSpec::triangle(9, 4)).unwrap();
        assert_eq!(g2.len(), 51);
        assert!(are_isomorphic(&g2, &t3));
    }

    #[test]
    fn build_matches_brute_force_star_count() {
        // C(6,2) by direct enumeration.
        let count = k_subsets(7, 3).filter(|e| e.contains(0)).count();
        assert_eq!(count, 15);
    }

    #[test]
    fn invalid_placements_error() {
        let bad_hm = CanonicalSpec {
            n: 7,
            k: 3,
            placement: Placement::HiltonMilner { f: EdgeMask::prefix(3), center: 1 },
        };
        assert!(matches!(build(&bad_hm), Err(Error::InvalidPlacement(_))));
        let bad_j = CanonicalSpec {
            n: 7,
            k: 3,
            placement: Placement::J {
                e: EdgeMask::from_elements([3, 4]),
                j: EdgeMask::from_elements([0, 3, 2]),
                x0: 0,
            },
        };
        assert!(matches!(build(&bad_j), Err(Error::InvalidPlacement(_))));
        let bad_g = CanonicalSpec { n: 7, k: 3, placement: Placement::G { e: EdgeMask::prefix(4), x0: 5 } };
        assert!(build(&bad_g).is_err());
        assert!(build(&CanonicalSpec { n: 7, k: 3, placement: Placement::Star { center: 7 } }).is_err());
    }

    #[test]
    fn bound_values() {
        assert_eq!(ekr_bound(7, 3), Ok(15));
        assert_eq!(ekr_bound(8, 3), Ok(21));
        for k in 1..8 {
            assert_eq!(ekr_bound(2 * k, k).unwrap() as u128, binom(2 * k as i64 - 1, k as i64 - 1));
        }
        assert!(ekr_bound(5, 3).is_err());
        assert_eq!(hm_bound(7, 3), Ok(13));
        // C(7,2) - C(4,2) + 1
        assert_eq!(hm_bound(8, 3), Ok(16));
        // C(8,3) - C(4,3) + 1
        assert_eq!(hm_bound(9, 4), Ok(53));
        assert!(hm_bound(6, 3).is_err());
        assert_eq!(main_bound(7, 3), Ok(12));
        assert_eq!(main_bound(8, 3), Ok(14));
        assert_eq!(main_bound(9, 4), Ok(51));
        assert!(main_bound(8, 4).is_err());
        assert!(main_bound(9, 2).is_err());
    }

    #[test]
    fn hm2_special_cases() {
        for (n, k) in [(7, 3), (8, 3), (9, 4), (12, 5)] {
            assert_eq!(hm2_bound(n, k, 0).unwrap().0, ekr_bound(n, k).unwrap());
            assert_eq!(hm2_bound(n, k, 1).unwrap().0, hm_bound(n, k).unwrap());
            assert_eq!(hm2_large_case(n, k, 2), main_bound(n, k).unwrap());
        }
        // k = 3, s = 2 selects the small branch, 3n - 8.
        assert_eq!(hm2_bound(7, 3, 2), Ok((13, Hm2Case::Small)));
        assert_eq!(hm2_large_case(7, 3, 2), 12);
        assert!(hm2_bound(7, 4, 1).is_err());
    }

    #[test]
    fn main_bound_k3_is_linear() {
        for n in 7..40 {
            assert_eq!(main_bound(n, 3).unwrap(), 2 * n as u64 - 2);
        }
    }

    #[test]
    fn s_cover_examples() {
        let star5 = SetFamily::from_lists(7, 3, &[&[0, 1, 2], &[0, 1, 3], &[0, 1, 4], &[0, 2, 3], &[0, 5, 6]]).unwrap();
        assert!(s_cover_condition(&star5, 0));
        assert!(!s_cover_condition(&star5, 1));
        let j2 = build(&CanonicalSpec::j(7, 3, 2)).unwrap();
        assert!(s_cover_condition(&j2, 2));
    }
}
