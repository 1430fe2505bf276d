//! The hash-consed node store.
//!
//! Recursive nodes use de Bruijn indices: `Var(k)` refers to the `k`-th
//! enclosing `Mu`, counting outward from 0. Two α-equivalent recursive nodes
//! therefore have the same structure and intern to the same id.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::egraph::{close_explicit, pcs_consistent};
use crate::error::EctaError;
use crate::pcs::Pcs;
use crate::term::Symbol;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    /// The empty node. Always the first entry of every store.
    pub const BOTTOM: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// A transition: a symbol, one child node per argument, and the constraints
/// on the terms it builds.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Edge {
    symbol: Symbol,
    children: Vec<NodeId>,
    constraints: Pcs,
}

impl Edge {
    /// Checks arity only. Use [`Store::mk_edge`] to get the collapsing constructor.
    pub fn new(symbol: Symbol, children: Vec<NodeId>, constraints: Pcs) -> Result<Edge, EctaError> {
        if symbol.arity() != children.len() {
            return Err(EctaError::ArityMismatch {
                expected: symbol.arity(),
                got: children.len(),
                symbol,
            });
        }
        Ok(Edge { symbol, children, constraints })
    }

    pub(crate) fn raw(symbol: Symbol, children: Vec<NodeId>, constraints: Pcs) -> Edge {
        debug_assert_eq!(symbol.arity(), children.len());
        Edge { symbol, children, constraints }
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    pub fn constraints(&self) -> &Pcs {
        &self.constraints
    }

    pub fn arity(&self) -> usize {
        self.children.len()
    }

    pub fn with_children(&self, children: Vec<NodeId>) -> Edge {
        Edge::raw(self.symbol.clone(), children, self.constraints.clone())
    }

    pub fn with_constraints(&self, constraints: Pcs) -> Edge {
        Edge::raw(self.symbol.clone(), self.children.clone(), constraints)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    Bottom,
    /// Edges sorted and duplicate-free; never empty.
    Plain(Vec<Edge>),
    /// A recursive node binding index 0 within its body.
    Mu(NodeId),
    /// A reference to an enclosing `Mu`, by de Bruijn index.
    Var(u32),
}

#[derive(Clone, Debug)]
struct NodeData {
    node: Node,
    /// De Bruijn indices free in this node, sorted.
    free: Box<[u32]>,
    constrained: bool,
    cyclic: bool,
}

#[derive(Default, Clone)]
pub(crate) struct Caches {
    unfold: FxHashMap<NodeId, NodeId>,
    subst: FxHashMap<(NodeId, u32, NodeId), NodeId>,
    shift: FxHashMap<(NodeId, u32), NodeId>,
    productive: FxHashMap<NodeId, bool>,
    normalize: FxHashMap<NodeId, NodeId>,
    skeleton: FxHashMap<NodeId, NodeId>,
    consistent: FxHashMap<Pcs, bool>,
    combine: FxHashMap<(Pcs, Pcs), Option<Pcs>>,
    pub(crate) intersect: FxHashMap<(NodeId, NodeId), NodeId>,
    pub(crate) height: FxHashMap<(NodeId, u32), u32>,
}

/// Interned, append-only storage for nodes.
#[derive(Clone)]
pub struct Store {
    nodes: Vec<NodeData>,
    index: FxHashMap<Node, NodeId>,
    caches: Caches,
}

impl Default for Store {
    fn default() -> Self {
        Store::new()
    }
}

impl fmt::Debug for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Store").field("nodes", &self.nodes.len()).finish()
    }
}

impl Store {
    pub fn new() -> Store {
        let mut s = Store { nodes: Vec::new(), index: FxHashMap::default(), caches: Caches::default() };
        let b = s.intern(Node::Bottom);
        debug_assert_eq!(b, NodeId::BOTTOM);
        s
    }

    /// Number of distinct nodes interned so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let (free, constrained, cyclic) = match &node {
            Node::Bottom => (Vec::new(), false, false),
            Node::Var(k) => (vec![*k], false, false),
            Node::Mu(b) => {
                let d = &self.nodes[b.index()];
                let free = d.free.iter().filter(|&&k| k > 0).map(|k| k - 1).collect();
                (free, d.constrained, true)
            }
            Node::Plain(edges) => {
                let mut free = Vec::new();
                let mut constrained = false;
                let mut cyclic = false;
                for e in edges {
                    constrained |= !e.constraints.is_empty();
                    for c in &e.children {
                        let d = &self.nodes[c.index()];
                        free.extend_from_slice(&d.free);
                        constrained |= d.constrained;
                        cyclic |= d.cyclic;
                    }
                }
                free.sort_unstable();
                free.dedup();
                (free, constrained, cyclic)
            }
        };
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node store overflow"));
        self.nodes.push(NodeData { node: node.clone(), free: free.into(), constrained, cyclic });
        self.index.insert(node, id);
        id
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()].node
    }

    /// The edges of a plain node; empty for every other kind.
    pub fn edges(&self, id: NodeId) -> &[Edge] {
        match self.node(id) {
            Node::Plain(es) => es,
            _ => &[],
        }
    }

    pub fn is_bottom(&self, id: NodeId) -> bool {
        id == NodeId::BOTTOM
    }

    pub fn is_mu(&self, id: NodeId) -> bool {
        matches!(self.node(id), Node::Mu(_))
    }

    /// True when some edge reachable without unfolding carries a constraint.
    pub fn is_constrained(&self, id: NodeId) -> bool {
        self.nodes[id.index()].constrained
    }

    /// True when a recursive node is reachable.
    pub fn is_cyclic(&self, id: NodeId) -> bool {
        self.nodes[id.index()].cyclic
    }

    pub fn is_closed(&self, id: NodeId) -> bool {
        self.nodes[id.index()].free.is_empty()
    }

    fn free_contains(&self, id: NodeId, k: u32) -> bool {
        self.nodes[id.index()].free.binary_search(&k).is_ok()
    }

    /// The collapsing edge constructor: `Ok(None)` stands for the empty edge,
    /// produced when a child is the bottom node or the constraints are inconsistent.
    pub fn mk_edge(&mut self, symbol: Symbol, children: Vec<NodeId>, constraints: Pcs) -> Result<Option<Edge>, EctaError> {
        let e = Edge::new(symbol, children, constraints)?;
        if e.children.contains(&NodeId::BOTTOM) || !self.consistent(&e.constraints) {
            return Ok(None);
        }
        Ok(Some(e))
    }

    /// Convenience for constructing fixtures; panics on arity mismatch.
    pub fn edge(&mut self, name: &str, children: Vec<NodeId>, constraints: Pcs) -> Option<Edge> {
        let sym = Symbol::new(name, children.len());
        self.mk_edge(sym, children, constraints).expect("arity is derived from the child count")
    }

    /// Interns a plain node with the given edges, sorted and deduplicated.
    /// No edges gives the bottom node. Edges are stored as given; see [`Store::normalize`].
    pub fn mk_node(&mut self, mut edges: Vec<Edge>) -> NodeId {
        edges.sort();
        edges.dedup();
        if edges.is_empty() {
            return NodeId::BOTTOM;
        }
        self.intern(Node::Plain(edges))
    }

    /// Builds a node from edges that may have collapsed to the empty edge.
    pub fn node_of(&mut self, edges: impl IntoIterator<Item = Option<Edge>>) -> NodeId {
        let edges = edges.into_iter().flatten().collect();
        self.mk_node(edges)
    }

    /// Leaf node with a single nullary edge.
    pub fn leaf(&mut self, name: &str) -> NodeId {
        let e = Edge::raw(Symbol::new(name, 0), Vec::new(), Pcs::empty());
        self.mk_node(vec![e])
    }

    pub fn mk_var(&mut self, k: u32) -> NodeId {
        self.intern(Node::Var(k))
    }

    /// Wraps `body` in a binder. When the body never refers to the new
    /// binder the body is returned with its outer references renumbered.
    pub fn mk_mu(&mut self, body: NodeId) -> NodeId {
        match self.node(body) {
            Node::Bottom | Node::Var(0) => return NodeId::BOTTOM,
            _ => {}
        }
        if !self.free_contains(body, 0) {
            return self.shift_down(body, 0);
        }
        self.intern(Node::Mu(body))
    }

    /// Decrements free indices above `cutoff`; index `cutoff` must not occur.
    fn shift_down(&mut self, n: NodeId, cutoff: u32) -> NodeId {
        if self.nodes[n.index()].free.iter().all(|&k| k < cutoff) {
            return n;
        }
        if let Some(&r) = self.caches.shift.get(&(n, cutoff)) {
            return r;
        }
        let r = match self.node(n).clone() {
            Node::Bottom => n,
            Node::Var(k) => {
                assert_ne!(k, cutoff, "shifting away a referenced binder");
                if k > cutoff {
                    self.mk_var(k - 1)
                } else {
                    n
                }
            }
            Node::Mu(b) => {
                let b2 = self.shift_down(b, cutoff + 1);
                self.intern(Node::Mu(b2))
            }
            Node::Plain(edges) => {
                let edges = edges
                    .iter()
                    .map(|e| {
                        let ch = e.children.iter().map(|&c| self.shift_down(c, cutoff)).collect();
                        e.with_children(ch)
                    })
                    .collect();
                self.mk_node(edges)
            }
        };
        self.caches.shift.insert((n, cutoff), r);
        r
    }

    /// Replaces index `depth` with the closed node `repl`.
    fn subst(&mut self, n: NodeId, depth: u32, repl: NodeId) -> NodeId {
        if !self.free_contains(n, depth) {
            return n;
        }
        if let Some(&r) = self.caches.subst.get(&(n, depth, repl)) {
            return r;
        }
        let r = match self.node(n).clone() {
            Node::Var(_) => repl,
            Node::Mu(b) => {
                let b2 = self.subst(b, depth + 1, repl);
                self.intern(Node::Mu(b2))
            }
            Node::Plain(edges) => {
                let edges = edges
                    .iter()
                    .map(|e| {
                        let ch = e.children.iter().map(|&c| self.subst(c, depth, repl)).collect();
                        e.with_children(ch)
                    })
                    .collect();
                self.mk_node(edges)
            }
            Node::Bottom => n,
        };
        self.caches.subst.insert((n, depth, repl), r);
        r
    }

    /// One layer of unfolding for a closed recursive node; identity otherwise.
    pub fn unfold(&mut self, n: NodeId) -> NodeId {
        let Node::Mu(body) = *self.node(n) else { return n };
        debug_assert!(self.is_closed(n), "unfolding an open recursive node");
        if let Some(&r) = self.caches.unfold.get(&n) {
            return r;
        }
        let r = self.subst(body, 0, n);
        self.caches.unfold.insert(n, r);
        r
    }

    /// The edges of `n` after unfolding, cloned.
    pub fn unfolded_edges(&mut self, n: NodeId) -> Vec<Edge> {
        let u = self.unfold(n);
        self.edges(u).to_vec()
    }

    pub(crate) fn consistent(&mut self, pcs: &Pcs) -> bool {
        if pcs.is_empty() {
            return true;
        }
        if let Some(&b) = self.caches.consistent.get(pcs) {
            return b;
        }
        let b = pcs_consistent(pcs);
        self.caches.consistent.insert(pcs.clone(), b);
        b
    }

    /// Closed union of two constraint sets restricted to their own paths;
    /// `None` if they conflict.
    pub(crate) fn combine_constraints(&mut self, a: &Pcs, b: &Pcs) -> Option<Pcs> {
        if b.is_empty() || a == b {
            return Some(a.clone());
        }
        if a.is_empty() {
            return Some(b.clone());
        }
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(r) = self.caches.combine.get(&key) {
            return r.clone();
        }
        let r = close_explicit(&a.union(b));
        self.caches.combine.insert(key, r.clone());
        r
    }

    /// Least-fixpoint inhabitation of the skeleton, with `env` giving the
    /// status of enclosing binders (innermost last).
    fn productive(&mut self, n: NodeId, env: &mut Vec<bool>) -> bool {
        let closed = self.is_closed(n);
        if closed {
            if let Some(&b) = self.caches.productive.get(&n) {
                return b;
            }
        }
        let r = match self.node(n).clone() {
            Node::Bottom => false,
            Node::Var(k) => env[env.len() - 1 - k as usize],
            Node::Mu(b) => {
                env.push(false);
                let r = self.productive(b, env);
                env.pop();
                r
            }
            Node::Plain(edges) => {
                let mut any = false;
                for e in &edges {
                    if self.consistent(&e.constraints) && e.children.iter().all(|&c| self.productive(c, env)) {
                        any = true;
                        break;
                    }
                }
                any
            }
        };
        if closed {
            self.caches.productive.insert(n, r);
        }
        r
    }

    /// Drops every edge that has an uninhabited child or inconsistent
    /// constraints, recursively. Nodes left without edges become bottom.
    pub fn normalize(&mut self, n: NodeId) -> NodeId {
        assert!(self.is_closed(n), "normalize expects a closed node");
        self.normalize_in(n, &mut Vec::new())
    }

    fn normalize_in(&mut self, n: NodeId, env: &mut Vec<bool>) -> NodeId {
        let closed = self.is_closed(n);
        if closed {
            if let Some(&r) = self.caches.normalize.get(&n) {
                return r;
            }
        }
        let r = match self.node(n).clone() {
            Node::Bottom | Node::Var(_) => n,
            Node::Mu(b) => {
                env.push(false);
                let inhabited = self.productive(b, env);
                env.pop();
                if inhabited {
                    env.push(true);
                    let b2 = self.normalize_in(b, env);
                    env.pop();
                    self.mk_mu(b2)
                } else {
                    NodeId::BOTTOM
                }
            }
            Node::Plain(edges) => {
                let mut out = Vec::with_capacity(edges.len());
                for e in &edges {
                    if !self.consistent(&e.constraints) {
                        continue;
                    }
                    if !e.children.iter().all(|&c| self.productive(c, env)) {
                        continue;
                    }
                    let ch: Vec<NodeId> = e.children.iter().map(|&c| self.normalize_in(c, env)).collect();
                    if ch.contains(&NodeId::BOTTOM) {
                        continue;
                    }
                    out.push(e.with_children(ch));
                }
                self.mk_node(out)
            }
        };
        if closed {
            self.caches.normalize.insert(n, r);
            self.caches.normalize.insert(r, r);
        }
        r
    }

    /// Removes every constraint.
    pub fn skeleton(&mut self, n: NodeId) -> NodeId {
        if !self.is_constrained(n) {
            return n;
        }
        if let Some(&r) = self.caches.skeleton.get(&n) {
            return r;
        }
        let r = match self.node(n).clone() {
            Node::Bottom | Node::Var(_) => n,
            Node::Mu(b) => {
                let b2 = self.skeleton(b);
                self.intern(Node::Mu(b2))
            }
            Node::Plain(edges) => {
                let edges = edges
                    .iter()
                    .map(|e| {
                        let ch = e.children.iter().map(|&c| self.skeleton(c)).collect();
                        Edge::raw(e.symbol.clone(), ch, Pcs::empty())
                    })
                    .collect();
                self.mk_node(edges)
            }
        };
        self.caches.skeleton.insert(n, r);
        r
    }

    /// No recursive node reachable from `n` has a constraint in its body.
    pub fn is_finitely_constrained(&self, n: NodeId) -> bool {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![n];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            match self.node(x) {
                Node::Mu(b) => {
                    if self.is_constrained(*b) {
                        return false;
                    }
                }
                Node::Plain(es) => {
                    for e in es {
                        stack.extend(e.children.iter().copied());
                    }
                }
                _ => {}
            }
        }
        true
    }

    /// Distinct nodes reachable from `n` without unfolding, in first-visit order.
    pub fn reachable(&self, n: NodeId) -> Vec<NodeId> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut order = Vec::new();
        let mut stack = vec![n];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            order.push(x);
            match self.node(x) {
                Node::Mu(b) => stack.push(*b),
                Node::Plain(es) => {
                    for e in es.iter().rev() {
                        for &c in e.children.iter().rev() {
                            stack.push(c);
                        }
                    }
                }
                _ => {}
            }
        }
        order
    }

    /// Total edges over the distinct reachable nodes.
    pub fn edge_count(&self, n: NodeId) -> usize {
        self.reachable(n).iter().map(|&x| self.edges(x).len()).sum()
    }

    pub(crate) fn caches_mut(&mut self) -> &mut Caches {
        &mut self.caches
    }
}
