//! The individual rewrite rules on enumeration states.

use thiserror::Error;

use super::state::{project, EnumState, Fragment, PTerm, VarId};
use crate::store::{Node, NodeId, Store};

/// Where a u-node sits: which binding, and the child-index route inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub var: VarId,
    pub pos: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("no u-node at {0:?}")]
    NoUNode(Location),
    #[error("variable {0} is not solved")]
    Unsolved(VarId),
    #[error("u-node carries a fragment for itself and must be suspended first")]
    RootFragment,
    #[error("no root fragment to suspend")]
    NothingToSuspend,
    #[error("edge index {index} out of range for a node with {count} edges")]
    NoSuchEdge { index: usize, count: usize },
    #[error("node is not recursive")]
    NotRecursive,
    #[error("recursive node is unrestricted")]
    Unrestricted,
    #[error("node is recursive; unfold it first")]
    Recursive,
}

/// Outcome of a rule that can discover an empty branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Live,
    /// The branch denotes nothing and should be abandoned.
    Dead,
}

fn unode_at<'a>(st: &'a EnumState, loc: &Location) -> Result<(NodeId, &'a [Fragment]), RuleError> {
    match st.binding(loc.var).and_then(|t| t.get(&loc.pos)) {
        Some(PTerm::UNode(n, fs)) => Ok((*n, fs)),
        _ => Err(RuleError::NoUNode(loc.clone())),
    }
}

/// Replaces the u-node at `loc` by one of its node's edges. Every class of
/// the edge's constraints gets a fresh variable; children inherit the
/// projected fragments. The branch is dead when a fragment addresses a
/// child the edge does not have.
pub fn step_choose(
    store: &mut Store,
    st: &mut EnumState,
    loc: &Location,
    edge_index: usize,
) -> Result<Outcome, RuleError> {
    let (n, frags) = unode_at(st, loc)?;
    if st.mentioned_vars().contains(&st.find(loc.var)) {
        return Err(RuleError::Unsolved(st.find(loc.var)));
    }
    if frags.iter().any(Fragment::is_root) {
        return Err(RuleError::RootFragment);
    }
    if store.is_mu(n) {
        return Err(RuleError::Recursive);
    }
    let count = store.edges(n).len();
    let edge = store.edges(n).get(edge_index).ok_or(RuleError::NoSuchEdge { index: edge_index, count })?.clone();
    let mut all = st.canon(frags);
    for c in edge.constraints().classes() {
        let v = st.fresh_var();
        all.push(Fragment { pec: c.clone(), var: v });
    }
    let arity = edge.arity();
    if all.iter().flat_map(|f| f.pec.paths()).any(|p| p.first().is_some_and(|i| i as usize >= arity)) {
        return Ok(Outcome::Dead);
    }
    let children = edge
        .children()
        .iter()
        .enumerate()
        .map(|(i, &c)| PTerm::UNode(c, project(&all, i)))
        .collect();
    let slot = st.binding_mut(loc.var).and_then(|t| t.get_mut(&loc.pos)).expect("checked above");
    *slot = PTerm::App(edge.symbol().clone(), children);
    Ok(Outcome::Live)
}

/// Unfolds a restricted recursive u-node by one layer.
pub fn step_choose_mu(store: &mut Store, st: &mut EnumState, loc: &Location) -> Result<(), RuleError> {
    let (n, frags) = unode_at(st, loc)?;
    if !matches!(store.node(n), Node::Mu(_)) {
        return Err(RuleError::NotRecursive);
    }
    if frags.is_empty() && !store.is_constrained(n) {
        return Err(RuleError::Unrestricted);
    }
    let frags = frags.to_vec();
    let u = store.unfold(n);
    let slot = st.binding_mut(loc.var).and_then(|t| t.get_mut(&loc.pos)).expect("checked above");
    *slot = PTerm::UNode(u, frags);
    Ok(())
}

/// Moves a u-node that must equal some variable into that variable's
/// binding, intersecting with whatever the variable already holds.
pub fn step_suspend(store: &mut Store, st: &mut EnumState, loc: &Location) -> Result<Outcome, RuleError> {
    let (n, frags) = unode_at(st, loc)?;
    let frags = st.canon(frags);
    let k = frags.iter().position(Fragment::is_root).ok_or(RuleError::NothingToSuspend)?;
    let mut target = frags[k].var;
    // Follow aliases that have not been substituted away yet.
    while let Some(PTerm::Var(w)) = st.binding(target) {
        target = st.find(*w);
    }
    let mut rest = frags;
    rest.remove(k);
    let owner = st.find(loc.var);

    if target == owner {
        if loc.pos.is_empty() {
            // The binding's own value trivially equals itself.
            let slot = st.binding_mut(loc.var).expect("checked above");
            *slot = PTerm::UNode(n, rest);
            return Ok(Outcome::Live);
        }
        // A term equal to one of its own proper subterms.
        return Ok(Outcome::Dead);
    }

    let merged = match st.binding(target) {
        None => PTerm::UNode(n, rest),
        Some(PTerm::UNode(m, theirs)) => {
            let (m, theirs) = (*m, theirs.clone());
            let meet = store.intersect(n, m);
            if meet == NodeId::BOTTOM {
                return Ok(Outcome::Dead);
            }
            rest.extend(theirs);
            PTerm::UNode(meet, st.canon(&rest))
        }
        Some(_) => {
            // Only solved variables are expanded, and a solved variable never
            // regains fragments, so this cannot arise from the engine.
            debug_assert!(false, "suspending into an already expanded variable");
            return Ok(Outcome::Dead);
        }
    };
    let slot = st.binding_mut(loc.var).and_then(|t| t.get_mut(&loc.pos)).expect("checked above");
    *slot = PTerm::Var(target);
    st.set_binding(target, Some(merged));
    Ok(Outcome::Live)
}

/// Eliminates every binding of the form `v2 = v1`. Returns whether anything changed.
pub fn step_subst(st: &mut EnumState) -> bool {
    let mut changed = false;
    loop {
        let alias = st.bound_vars().find_map(|(v, t)| match t {
            PTerm::Var(w) if v != VarId::ROOT => Some((v, *w)),
            _ => None,
        });
        let Some((v, w)) = alias else { return changed };
        st.set_binding(v, None);
        st.merge_into(v, w);
        changed = true;
    }
}

/// Every u-node with a fragment for itself, in binding then preorder order.
pub fn all_suspendable(st: &EnumState) -> Vec<Location> {
    let mut out = Vec::new();
    for (v, t) in st.bound_vars() {
        t.visit(&mut |pos, s| {
            if let PTerm::UNode(_, fs) = s {
                if fs.iter().any(Fragment::is_root) {
                    out.push(Location { var: v, pos: pos.to_vec() });
                }
            }
        });
    }
    out
}

/// First u-node, in binding then preorder order, with a fragment for itself.
pub fn find_suspendable(st: &EnumState) -> Option<Location> {
    for (v, t) in st.bound_vars() {
        let mut found = None;
        t.visit(&mut |pos, s| {
            if found.is_none() {
                if let PTerm::UNode(_, fs) = s {
                    if fs.iter().any(Fragment::is_root) {
                        found = Some(pos.to_vec());
                    }
                }
            }
        });
        if let Some(pos) = found {
            return Some(Location { var: v, pos });
        }
    }
    None
}
