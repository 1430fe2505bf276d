//! Path constraint reasoning checked against brute force over small terms.

use std::collections::BTreeSet;

use ecta::{pcs_consistent, Path, PathEGraph, Pcs, Pec, Term};
use proptest::prelude::*;

/// Every term over `{a, f/2}` of depth at most `depth`.
fn small_terms(depth: usize) -> Vec<Term> {
    let mut terms = vec![Term::leaf("a")];
    for _ in 1..depth {
        let mut next = vec![Term::leaf("a")];
        for l in &terms {
            for r in &terms {
                next.push(Term::app("f", vec![l.clone(), r.clone()]));
            }
        }
        terms = next;
    }
    terms
}

fn path_strategy() -> impl Strategy<Value = Path> {
    prop::collection::vec(0u32..2, 1..=2).prop_map(Path::new)
}

fn pcs_strategy() -> impl Strategy<Value = Pcs> {
    prop::collection::vec(prop::collection::btree_set(path_strategy(), 2..=3), 1..=2)
        .prop_map(|classes| Pcs::normalize(classes.into_iter().map(Pec::new)))
}

/// Equalities derivable by symmetry, transitivity and congruence, computed
/// by saturating a relation over every path up to `max_len`.
fn saturate(pcs: &Pcs, max_len: usize) -> BTreeSet<(Path, Path)> {
    let mut universe = vec![Path::root()];
    let mut frontier = vec![Path::root()];
    for _ in 0..max_len {
        frontier = frontier.iter().flat_map(|p| [p.child(0), p.child(1)]).collect();
        universe.extend(frontier.iter().cloned());
    }
    let mut rel: BTreeSet<(Path, Path)> = universe.iter().map(|p| (p.clone(), p.clone())).collect();
    for c in pcs.classes() {
        for p in c.paths() {
            for q in c.paths() {
                rel.insert((p.clone(), q.clone()));
            }
        }
    }
    loop {
        let mut added = Vec::new();
        for (p, q) in &rel {
            for i in 0..2 {
                let (pi, qi) = (p.child(i), q.child(i));
                if pi.len() <= max_len && qi.len() <= max_len && !rel.contains(&(pi.clone(), qi.clone())) {
                    added.push((pi, qi));
                }
            }
            for (r, s) in rel.range((q.clone(), Path::root())..) {
                if r != q {
                    break;
                }
                if !rel.contains(&(p.clone(), s.clone())) {
                    added.push((p.clone(), s.clone()));
                }
            }
        }
        if added.is_empty() {
            return rel;
        }
        rel.extend(added);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn consistency_agrees_with_brute_force(pcs in pcs_strategy()) {
        let satisfiable = small_terms(5).iter().any(|t| pcs.satisfied_by(t));
        let consistent = pcs_consistent(&pcs);
        if satisfiable {
            prop_assert!(consistent);
        }
        if consistent {
            let w = PathEGraph::closure(&pcs).witness().expect("consistent sets have witnesses");
            prop_assert!(pcs.satisfied_by(&w), "witness {} fails {}", w, pcs);
        } else {
            prop_assert!(PathEGraph::closure(&pcs).witness().is_none());
        }
    }

    #[test]
    fn closure_matches_saturation(pcs in pcs_strategy()) {
        let g = PathEGraph::closure(&pcs);
        let rel = saturate(&pcs, 4);
        for (p, q) in &rel {
            if p.len() <= 3 && q.len() <= 3 {
                prop_assert!(g.equivalent(p, q), "{} = {} missing from closure of {}", p, q, pcs);
            }
        }
        let short: Vec<Path> = rel.iter().map(|(p, _)| p.clone()).filter(|p| p.len() <= 3).collect();
        for p in &short {
            for q in &short {
                if g.equivalent(p, q) {
                    prop_assert!(rel.contains(&(p.clone(), q.clone())), "closure of {} adds {} = {}", pcs, p, q);
                }
            }
        }
    }
}

#[test]
fn worked_consistency_examples() {
    let bad: Pcs = "0=1.0;0.0=1".parse().unwrap();
    let good: Pcs = "0.0=1.0".parse().unwrap();
    assert!(!pcs_consistent(&bad));
    assert!(pcs_consistent(&good));
}
