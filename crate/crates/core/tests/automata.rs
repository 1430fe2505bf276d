//! Lattice operations, normalization, reduction and enumeration on random
//! automata, each compared with bounded denotation.

use std::collections::BTreeSet;

use ecta::gen::{random_ecta, GenConfig};
use ecta::oracle::oracle_check;
use ecta::{fixtures, parse_ecta, print_ecta, NodeId, ReductionAlgo, Store, Term};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const DEPTH: usize = 4;

fn build(store: &mut Store, seed: u64, recursive: bool) -> NodeId {
    let mut rng = StdRng::seed_from_u64(seed);
    random_ecta(store, &mut rng, &GenConfig { recursive, ..GenConfig::default() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn union_and_intersection_denote_set_operations(a in any::<u64>(), b in any::<u64>()) {
        let mut s = Store::new();
        let (x, y) = (build(&mut s, a, false), build(&mut s, b, false));
        let (dx, dy) = (s.denote_bounded(x, DEPTH), s.denote_bounded(y, DEPTH));
        let u = s.union(x, y);
        let i = s.intersect(x, y);
        prop_assert_eq!(s.denote_bounded(u, DEPTH), dx.union(&dy).cloned().collect::<BTreeSet<Term>>());
        prop_assert_eq!(s.denote_bounded(i, DEPTH), dx.intersection(&dy).cloned().collect::<BTreeSet<Term>>());
        prop_assert_eq!(s.intersect(x, x), x);
        prop_assert_eq!(s.intersect(x, y), s.intersect(y, x));
        prop_assert_eq!(s.union(x, y), s.union(y, x));
    }

    #[test]
    fn normalization_is_idempotent_and_faithful(seed in any::<u64>()) {
        let mut s = Store::new();
        let n = build(&mut s, seed, false);
        let m = s.normalize(n);
        prop_assert_eq!(s.normalize(m), m);
        prop_assert_eq!(s.denote_bounded(m, DEPTH), s.denote_bounded(n, DEPTH));
        let sk = s.skeleton(n);
        prop_assert!(s.denote_bounded(sk, DEPTH).is_superset(&s.denote_bounded(n, DEPTH)));
    }

    #[test]
    fn reduction_preserves_denotation(seed in any::<u64>()) {
        let mut s = Store::new();
        let n = build(&mut s, seed, false);
        let want = s.denote_bounded(n, DEPTH);
        let (basic, _) = s.reduce_fixpoint_with(n, 10, ReductionAlgo::Basic);
        let (optimized, report) = s.reduce_fixpoint_with(n, 10, ReductionAlgo::Optimized);
        prop_assert_eq!(s.denote_bounded(basic, DEPTH), want.clone());
        prop_assert_eq!(s.denote_bounded(optimized, DEPTH), want);
        prop_assert!(report.converged);
    }

    #[test]
    fn enumeration_matches_denotation(seed in any::<u64>()) {
        let mut s = Store::new();
        let n = build(&mut s, seed, false);
        let report = oracle_check(&mut s, n, DEPTH);
        prop_assert!(report.passed(), "{:?}\n{}", report, print_ecta(&s, n));
    }

    #[test]
    fn recursive_slices_match_denotation(seed in any::<u64>()) {
        let mut s = Store::new();
        let n = build(&mut s, seed, true);
        let report = oracle_check(&mut s, n, 5);
        prop_assert!(report.passed(), "{:?}\n{}", report, print_ecta(&s, n));
    }

    #[test]
    fn text_round_trips(seed in any::<u64>(), recursive in any::<bool>()) {
        let mut s = Store::new();
        let n = build(&mut s, seed, recursive);
        let text = print_ecta(&s, n);
        prop_assert_eq!(parse_ecta(&mut s, &text).unwrap(), n);
    }
}

#[test]
fn overlapping_pair_union_and_intersection() {
    let mut s = Store::new();
    let (n1, n2) = fixtures::overlapping_pair(&mut s);
    let u = s.union(n1, n2);
    let names: Vec<String> = s.edges(u).iter().map(|e| e.symbol().name().to_string()).collect();
    assert_eq!(names, ["f", "g", "g", "h"]);
    let i = s.intersect(n1, n2);
    assert_eq!(s.edges(i).len(), 1);
    let g = &s.edges(i)[0];
    assert_eq!(g.symbol().name(), "g");
    assert_eq!(g.constraints().to_string(), "{0=1}");
    let terms: Vec<String> = s.denote_bounded(i, 3).iter().map(|t| t.to_string()).collect();
    assert_eq!(terms, ["g(Int,Int)"]);
}

#[test]
fn typed_application_reduction_drops_one_transition() {
    let mut s = Store::new();
    let n = fixtures::typed_application(&mut s);
    let (r, report) = s.reduce_fixpoint(n, 10);
    assert_eq!(report.edges_removed, 1);
    assert_eq!(s.edge_count(n) - s.edge_count(r), 1);
    assert_eq!(s.denote_bounded(r, 4), s.denote_bounded(n, 4));
    let text = print_ecta(&s, r);
    assert!(!text.contains(" f("), "{text}");
}

#[test]
fn query_reduction_leaves_a_single_run() {
    let mut s = Store::new();
    let n = fixtures::typed_application_query(&mut s);
    let (r, _) = s.reduce_fixpoint(n, 10);
    let sk = s.skeleton(r);
    let terms: Vec<String> = s.denote_bounded(sk, 5).iter().map(|t| t.to_string()).collect();
    assert_eq!(terms, ["query(app(g(Int,Bool),x(Int),Bool),Bool)"]);
}

#[test]
fn three_way_equality_reduces_by_both_algorithms() {
    let mut s = Store::new();
    let n = fixtures::three_way_equality(&mut s);
    let (basic, _) = s.reduce_fixpoint_with(n, 10, ReductionAlgo::Basic);
    let (optimized, _) = s.reduce_fixpoint_with(n, 10, ReductionAlgo::Optimized);
    assert_eq!(basic, optimized);
    let sk = s.skeleton(basic);
    let terms: Vec<String> = s.denote_bounded(sk, 3).iter().map(|t| t.to_string()).collect();
    assert_eq!(terms, ["w(b,b,b)"]);
}
