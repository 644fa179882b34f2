mod common;

use ekrw_core::search::{enumerate_maximum, ConstraintSet, SearchConfig};
use ekrw_core::search::iso_classes;

use common::{max_admissible_exhaustive, max_admissible_upward, Exclusions};

const CASES: [(usize, usize); 7] = [(4, 2), (5, 2), (6, 2), (7, 2), (8, 2), (6, 3), (7, 3)];

fn exclusion_sets(k: usize) -> Vec<Exclusions> {
    let mut out = vec![
        Exclusions::default(),
        Exclusions { trivial: true, ..Default::default() },
        Exclusions { trivial: true, hm: true, ..Default::default() },
        Exclusions { hm: true, ..Default::default() },
    ];
    if k == 3 {
        out.push(Exclusions { trivial: true, hm: true, g2: true, ..Default::default() });
        out.push(Exclusions { g2: true, ..Default::default() });
    }
    out
}

fn constraints(ex: &Exclusions) -> ConstraintSet {
    ConstraintSet {
        forbid_trivial: ex.trivial,
        forbid_hm: ex.hm,
        forbid_g2: ex.g2,
        forbid_j2: false,
        max_degree_cap: ex.cap,
    }
}

#[test]
fn branch_and_bound_matches_clique_enumeration() {
    for (n, k) in CASES {
        for ex in exclusion_sets(k) {
            let (best, fams) = max_admissible_upward(n, k, &ex);
            let out = enumerate_maximum(n, k, &constraints(&ex), &SearchConfig::default()).unwrap();
            assert!(out.complete);
            assert_eq!(out.optimum, best, "optimum at n={n} k={k} {ex:?}");
            let classes = iso_classes(fams);
            assert_eq!(out.witnesses.len(), classes.len(), "classes at n={n} k={k} {ex:?}");
        }
    }
}

#[test]
fn degree_cap_matches_exhaustive_enumeration() {
    for (n, k) in [(4, 2), (5, 2), (6, 2), (6, 3)] {
        for cap in 1..=6 {
            let ex = Exclusions { cap: Some(cap), ..Default::default() };
            let out = enumerate_maximum(n, k, &constraints(&ex), &SearchConfig::default()).unwrap();
            assert_eq!(out.optimum, max_admissible_exhaustive(n, k, &ex), "n={n} k={k} cap={cap}");
        }
    }
}
