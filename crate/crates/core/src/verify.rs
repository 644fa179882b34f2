//! Theorem checks: run the matching search and compare against the closed
//! form bound and the expected extremal families.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::canonical::{build, ekr_bound, hm2_bound, hm2_large_case, hm_bound, main_bound, CanonicalSpec, Hm2Case};
use crate::error::{Error, Result};
use crate::family::{are_isomorphic, SetFamily};
use crate::search::{enumerate_maximum, max_family, ConstraintSet, SearchConfig, SearchOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    Ekr,
    Hm,
    Hm2 { s: usize },
    Main,
    MaxDegCorollary,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem::Ekr => write!(f, "ekr"),
            Theorem::Hm => write!(f, "hm"),
            Theorem::Hm2 { s } => write!(f, "hm2:{s}"),
            Theorem::Main => write!(f, "main"),
            Theorem::MaxDegCorollary => write!(f, "maxdeg"),
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(text: &str) -> Result<Theorem> {
        let bad = || Error::Precondition(format!("unknown theorem {text:?}; expected ekr, hm, hm2:<s>, main or maxdeg"));
        match text.trim().to_ascii_lowercase().as_str() {
            "ekr" => Ok(Theorem::Ekr),
            "hm" => Ok(Theorem::Hm),
            "main" => Ok(Theorem::Main),
            "maxdeg" => Ok(Theorem::MaxDegCorollary),
            other => {
                let s = other.strip_prefix("hm2:").ok_or_else(bad)?;
                let s = s.parse().map_err(|_| bad())?;
                Ok(Theorem::Hm2 { s })
            }
        }
    }
}

impl Serialize for Theorem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Theorem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Theorem, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Inconclusive,
    Mismatch,
}

impl Verdict {
    /// Process exit status for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Mismatch => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub n: usize,
    pub k: usize,
    pub formula: u64,
    /// For HM2, the branch of the bound that applies and the other
    /// branch's expression.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hm2_case: Option<Hm2Case>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hm2_large_case_value: Option<u64>,
    pub degree_cap: Option<usize>,
    pub optimum: usize,
    pub matches: bool,
    /// Witness classes by name; families matching no named construction
    /// are listed as `unnamed`.
    pub classes: Vec<String>,
    pub witnesses: Vec<SetFamily>,
    pub expected_classes: Option<Vec<String>>,
    pub classes_match: Option<bool>,
    pub inconclusive: bool,
    pub verdict: Verdict,
    pub searches: usize,
    pub explored_nodes: u64,
    #[serde(with = "secs")]
    pub elapsed: Duration,
}

mod secs {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        d.as_secs_f64().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

/// Name of the first named construction at `(n, k)` isomorphic to `fam`.
pub fn class_name(fam: &SetFamily) -> Option<String> {
    let (n, k) = (fam.n(), fam.k());
    CanonicalSpec::all_named(n, k).into_iter().find_map(|spec| {
        let built = build(&spec).ok()?;
        are_isomorphic(&built, fam).then(|| spec.name())
    })
}

fn expected_specs(theorem: Theorem, n: usize, k: usize) -> Option<Vec<CanonicalSpec>> {
    match theorem {
        Theorem::Ekr if n > 2 * k => Some(vec![CanonicalSpec::star(n, k)]),
        Theorem::Hm if k <= 3 => Some(vec![CanonicalSpec::hilton_milner(n, k), CanonicalSpec::triangle(n, k)]),
        Theorem::Hm => Some(vec![CanonicalSpec::hilton_milner(n, k)]),
        Theorem::Main if k == 4 => Some(vec![CanonicalSpec::j(n, k, 2), CanonicalSpec::g(n, k, 2), CanonicalSpec::g(n, k, 3)]),
        Theorem::Main => Some(vec![CanonicalSpec::j(n, k, 2)]),
        Theorem::MaxDegCorollary if k >= 5 => Some(vec![CanonicalSpec::j(n, k, 2)]),
        _ => None,
    }
}

/// One representative per class, as families.
fn expected_families(theorem: Theorem, n: usize, k: usize) -> Result<Option<Vec<SetFamily>>> {
    let Some(specs) = expected_specs(theorem, n, k) else { return Ok(None) };
    let mut out: Vec<SetFamily> = Vec::new();
    for spec in specs {
        let fam = build(&spec)?;
        if !out.iter().any(|f| are_isomorphic(f, &fam)) {
            out.push(fam);
        }
    }
    Ok(Some(out))
}

fn same_classes(found: &[SetFamily], expected: &[SetFamily]) -> bool {
    found.len() == expected.len() && expected.iter().all(|e| found.iter().any(|f| are_isomorphic(e, f)))
}

fn check_hypotheses(theorem: Theorem, n: usize, k: usize) -> Result<()> {
    let fail = |msg: &str| Err(Error::Hypothesis(format!("{theorem} at n={n}, k={k}: {msg}")));
    match theorem {
        Theorem::Ekr if n < 2 * k || k == 0 => fail("needs n >= 2k"),
        Theorem::Hm if n <= 2 * k || k < 2 => fail("needs n > 2k and k >= 2"),
        Theorem::Main if n <= 2 * k || k < 3 => fail("needs n > 2k and k >= 3"),
        Theorem::MaxDegCorollary if n <= 2 * k || k < 4 => fail("needs n > 2k and k >= 4"),
        Theorem::Hm2 { s: 0 } => fail("needs s >= 1"),
        _ => Ok(()),
    }
}

struct Clock {
    start: Instant,
    budget: Option<Duration>,
}

impl Clock {
    fn config(&self, base: &SearchConfig) -> SearchConfig {
        let budget = self.budget.map(|b| b.saturating_sub(self.start.elapsed()));
        SearchConfig { budget, ..base.clone() }
    }
}

/// Largest `m` admitting an intersecting family of `m` sets with maximum
/// degree at most `m - s`, found by descending from the EKR bound.
///
/// With `f(T)` the optimum under degree cap `T - s`, a size `T` is feasible
/// iff `f(T) >= T`. Since `f` is nondecreasing, an infeasible `T` lets the
/// scan jump straight to `min(T - 1, f(T))`.
fn hm2_scan(n: usize, k: usize, s: usize, clock: &Clock, base: &SearchConfig) -> Result<Hm2Scan> {
    let mut t = ekr_bound(n, k)? as usize;
    let mut scan = Hm2Scan { found: None, complete: true, searches: 0, nodes: 0 };
    while t >= s.max(1) {
        let outcome = max_family(n, k, &ConstraintSet::with_cap(t - s), &clock.config(base))?;
        scan.searches += 1;
        scan.nodes += outcome.explored_nodes;
        if !outcome.complete {
            scan.complete = false;
            return Ok(scan);
        }
        if outcome.optimum >= t {
            scan.found = Some((t, outcome));
            return Ok(scan);
        }
        t = (t - 1).min(outcome.optimum);
    }
    Ok(scan)
}

struct Hm2Scan {
    /// Largest feasible size and the search that certified it.
    found: Option<(usize, SearchOutcome)>,
    complete: bool,
    searches: usize,
    nodes: u64,
}

/// Runs the search matching `theorem` at `(n, k)` and compares it with the
/// closed form. `config.budget` bounds the whole check.
pub fn verify_theorem(theorem: Theorem, n: usize, k: usize, config: &SearchConfig) -> Result<TheoremReport> {
    check_hypotheses(theorem, n, k)?;
    let start = Instant::now();
    let clock = Clock { start, budget: config.budget };
    let mut hm2_case = None;
    let mut hm2_large = None;
    let mut degree_cap = None;
    let (formula, optimum, witnesses, complete, searches, nodes) = match theorem {
        Theorem::Hm2 { s } => {
            let (value, case) = hm2_bound(n, k, s)?;
            hm2_case = Some(case);
            hm2_large = Some(hm2_large_case(n, k, s));
            let Hm2Scan { found, complete, searches, nodes } = hm2_scan(n, k, s, &clock, config)?;
            match found {
                Some((t, outcome)) => {
                    degree_cap = Some(t - s);
                    (value, t, outcome.witnesses, complete, searches, nodes)
                }
                None => (value, 0, Vec::new(), complete, searches, nodes),
            }
        }
        _ => {
            let (formula, constraints, enumerate) = match theorem {
                Theorem::Ekr => (ekr_bound(n, k)?, ConstraintSet::none(), true),
                Theorem::Hm => (hm_bound(n, k)?, ConstraintSet::non_trivial(), true),
                Theorem::Main => (main_bound(n, k)?, ConstraintSet::beyond_hm(k), true),
                Theorem::MaxDegCorollary => {
                    let j2 = build(&CanonicalSpec::j(n, k, 2))?;
                    degree_cap = Some(j2.max_degree());
                    (j2.len() as u64, ConstraintSet::with_cap(j2.max_degree()), k >= 5)
                }
                Theorem::Hm2 { .. } => unreachable!(),
            };
            let cfg = clock.config(config);
            let outcome =
                if enumerate { enumerate_maximum(n, k, &constraints, &cfg)? } else { max_family(n, k, &constraints, &cfg)? };
            (formula, outcome.optimum, outcome.witnesses, outcome.complete, 1, outcome.explored_nodes)
        }
    };

    let matches = complete && optimum as u64 == formula;
    let expected = expected_families(theorem, n, k)?;
    let classes_match = match &expected {
        Some(exp) if complete => Some(same_classes(&witnesses, exp)),
        _ => None,
    };
    let verdict = if !complete {
        Verdict::Inconclusive
    } else if matches && classes_match != Some(false) {
        Verdict::Verified
    } else {
        Verdict::Mismatch
    };
    let classes = witnesses.iter().map(|w| class_name(w).unwrap_or_else(|| "unnamed".into())).collect();
    let expected_classes = expected.map(|exp| exp.iter().map(|e| class_name(e).unwrap_or_else(|| "unnamed".into())).collect());
    Ok(TheoremReport {
        theorem,
        n,
        k,
        formula,
        hm2_case,
        hm2_large_case_value: hm2_large,
        degree_cap,
        optimum,
        matches,
        classes,
        witnesses,
        expected_classes,
        classes_match,
        inconclusive: !complete,
        verdict,
        searches,
        explored_nodes: nodes,
        elapsed: start.elapsed(),
    })
}

/// The default verification grid.
pub fn default_grid() -> Vec<(Theorem, usize, usize)> {
    let mut grid = Vec::new();
    for (n, k) in [(5, 2), (7, 3), (8, 3), (9, 4)] {
        grid.push((Theorem::Ekr, n, k));
    }
    for (n, k) in [(7, 3), (8, 3), (9, 4)] {
        grid.push((Theorem::Hm, n, k));
    }
    for (n, k) in [(7, 3), (8, 3), (9, 4)] {
        grid.push((Theorem::Main, n, k));
    }
    for (n, k) in [(7, 3), (8, 3), (9, 4)] {
        grid.push((Theorem::Hm2 { s: 2 }, n, k));
    }
    grid.push((Theorem::MaxDegCorollary, 9, 4));
    grid
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifySummary {
    pub rows: Vec<TheoremReport>,
    /// Rows whose hypotheses failed or whose search errored.
    pub errors: Vec<String>,
    pub verdict: Verdict,
}

impl VerifySummary {
    pub fn exit_code(&self) -> i32 {
        if self.errors.is_empty() {
            self.verdict.exit_code()
        } else {
            1
        }
    }
}

/// Runs `verify_theorem` over `grid`, each row with the budget in `config`.
pub fn verify_all(grid: &[(Theorem, usize, usize)], config: &SearchConfig) -> VerifySummary {
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for &(theorem, n, k) in grid {
        match verify_theorem(theorem, n, k, config) {
            Ok(report) => rows.push(report),
            Err(e) => errors.push(format!("{theorem} n={n} k={k}: {e}")),
        }
    }
    let verdict = rows.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Verified);
    VerifySummary { rows, errors, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_names_round_trip() {
        for t in [Theorem::Ekr, Theorem::Hm, Theorem::Hm2 { s: 3 }, Theorem::Main, Theorem::MaxDegCorollary] {
            assert_eq!(t.to_string().parse::<Theorem>().unwrap(), t);
        }
        assert!("hm2:x".parse::<Theorem>().is_err());
        assert!("foo".parse::<Theorem>().is_err());
    }

    #[test]
    fn ekr_7_3() {
        let r = verify_theorem(Theorem::Ekr, 7, 3, &SearchConfig::default()).unwrap();
        assert_eq!((r.formula, r.optimum), (15, 15));
        assert_eq!(r.classes, vec!["F0"]);
        assert_eq!(r.verdict, Verdict::Verified);
    }

    #[test]
    fn main_8_3() {
        let r = verify_theorem(Theorem::Main, 8, 3, &SearchConfig::default()).unwrap();
        assert_eq!((r.formula, r.optimum), (14, 14));
        assert_eq!(r.classes, vec!["J2"]);
        assert_eq!(r.classes_match, Some(true));
    }

    #[test]
    fn hm2_7_3_small_case() {
        let r = verify_theorem(Theorem::Hm2 { s: 2 }, 7, 3, &SearchConfig::default()).unwrap();
        assert_eq!(r.hm2_case, Some(Hm2Case::Small));
        assert_eq!((r.formula, r.optimum), (13, 13));
        assert_eq!(r.hm2_large_case_value, Some(main_bound(7, 3).unwrap()));
        assert_eq!(r.verdict, Verdict::Verified);
    }

    #[test]
    fn hypotheses_checked() {
        assert!(verify_theorem(Theorem::Main, 6, 3, &SearchConfig::default()).is_err());
        assert!(verify_theorem(Theorem::MaxDegCorollary, 7, 3, &SearchConfig::default()).is_err());
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let cfg = SearchConfig::with_budget(Duration::ZERO);
        let r = verify_theorem(Theorem::Main, 9, 4, &cfg).unwrap();
        assert!(r.inconclusive);
        assert_eq!(r.verdict.exit_code(), 3);
    }
}
