//! Turning fully enumerated states back into concrete terms.

use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use super::state::{EnumState, PTerm, VarId};
use crate::denote::product;
use crate::store::{NodeId, Store};
use crate::term::Term;

/// Deepest slice tried when a recursive state keeps producing fewer than `limit` terms.
const MAX_DEEPENING: usize = 64;

/// Every term of depth at most `max_depth` the state stands for. Variables
/// are assigned one value at a time, dependencies first, so every
/// occurrence of a variable expands to the same term.
pub fn expand_bounded(store: &mut Store, st: &EnumState, max_depth: usize) -> BTreeSet<Term> {
    let order = st.reachable_vars();
    // Free choices for each u-node, computed once.
    let mut denoted: FxHashMap<NodeId, BTreeSet<Term>> = FxHashMap::default();
    for &v in &order {
        if let Some(t) = st.binding(v) {
            t.visit(&mut |_, s| {
                if let PTerm::UNode(n, fs) = s {
                    debug_assert!(fs.is_empty(), "expanding a state that is not fully enumerated");
                    denoted.entry(*n).or_default();
                }
            });
        }
    }
    for (n, terms) in denoted.iter_mut() {
        *terms = store.denote_bounded(*n, max_depth);
    }
    let mut out = BTreeSet::new();
    let mut assignment = FxHashMap::default();
    assign(st, &order, &denoted, max_depth, &mut assignment, &mut out);
    out
}

fn assign(
    st: &EnumState,
    order: &[VarId],
    denoted: &FxHashMap<NodeId, BTreeSet<Term>>,
    max_depth: usize,
    assignment: &mut FxHashMap<VarId, Term>,
    out: &mut BTreeSet<Term>,
) {
    let Some((&v, rest)) = order.split_first() else { return };
    let Some(binding) = st.binding(v) else { return };
    let values = instances(st, binding, assignment, denoted, max_depth);
    if rest.is_empty() {
        out.extend(values);
        return;
    }
    for value in values {
        assignment.insert(v, value);
        assign(st, rest, denoted, max_depth, assignment, out);
    }
    assignment.remove(&v);
}

/// Terms of depth at most `max_depth` matching `t` under a partial assignment.
fn instances(
    st: &EnumState,
    t: &PTerm,
    assignment: &FxHashMap<VarId, Term>,
    denoted: &FxHashMap<NodeId, BTreeSet<Term>>,
    max_depth: usize,
) -> Vec<Term> {
    match t {
        PTerm::Var(v) => assignment.get(&st.find(*v)).filter(|t| t.depth() <= max_depth).cloned().into_iter().collect(),
        PTerm::UNode(n, _) => denoted[n].iter().filter(|t| t.depth() <= max_depth).cloned().collect(),
        PTerm::App(s, ch) => {
            if max_depth == 0 {
                return Vec::new();
            }
            let kids: Vec<Vec<Term>> = ch.iter().map(|c| instances(st, c, assignment, denoted, max_depth - 1)).collect();
            let lists: Vec<Vec<&Term>> = kids.iter().map(|k| k.iter().collect()).collect();
            product(&lists)
                .into_iter()
                .map(|combo| Term::new(s.clone(), combo.into_iter().cloned().collect()))
                .collect()
        }
    }
}

/// Up to `limit` terms of the state, shallowest first. Recursive states are
/// expanded by iterative deepening.
pub fn expand(store: &mut Store, st: &EnumState, limit: usize) -> Vec<Term> {
    let mut recursive = false;
    for v in st.reachable_vars() {
        if let Some(t) = st.binding(v) {
            t.visit(&mut |_, s| {
                if let PTerm::UNode(n, _) = s {
                    recursive |= store.is_cyclic(*n);
                }
            });
        }
    }
    let mut found = if recursive {
        let mut found = BTreeSet::new();
        for d in 1..=MAX_DEEPENING {
            found = expand_bounded(store, st, d);
            if found.len() >= limit {
                break;
            }
        }
        found
    } else {
        let bound = store.len() + st.size() + 1;
        expand_bounded(store, st, bound)
    }
    .into_iter()
    .collect::<Vec<_>>();
    found.sort_by_key(|t| t.depth());
    found.truncate(limit);
    found
}
