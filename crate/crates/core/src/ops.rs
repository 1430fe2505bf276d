//! Union, intersection and path-indexed queries.

use std::collections::{BTreeSet, HashMap};

use crate::pcs::Pcs;
use crate::store::{Edge, Node, NodeId, Store};
use crate::term::Path;

impl Store {
    pub fn union(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if a == b || b == NodeId::BOTTOM {
            return a;
        }
        if a == NodeId::BOTTOM {
            return b;
        }
        let mut edges = self.unfolded_edges(a);
        edges.extend(self.unfolded_edges(b));
        self.mk_node(edges)
    }

    pub fn union_all(&mut self, nodes: impl IntoIterator<Item = NodeId>) -> NodeId {
        let nodes: BTreeSet<NodeId> = nodes.into_iter().filter(|&n| n != NodeId::BOTTOM).collect();
        match nodes.len() {
            0 => NodeId::BOTTOM,
            1 => *nodes.iter().next().unwrap(),
            _ => {
                let mut edges = Vec::new();
                for n in nodes {
                    edges.extend(self.unfolded_edges(n));
                }
                self.mk_node(edges)
            }
        }
    }

    /// Intersection of two closed, normalized nodes.
    pub fn intersect(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let mut visiting = Vec::new();
        let r = self.intersect_in(a, b, &mut visiting);
        debug_assert!(self.is_closed(r));
        if self.is_cyclic(r) {
            self.normalize(r)
        } else {
            r
        }
    }

    /// `visiting` holds the node pairs currently being intersected, outermost
    /// first. Each of them is a potential binder; revisiting a pair yields a
    /// variable pointing at its frame.
    fn intersect_in(&mut self, a: NodeId, b: NodeId, visiting: &mut Vec<(NodeId, NodeId)>) -> NodeId {
        if a == b {
            return a;
        }
        if a == NodeId::BOTTOM || b == NodeId::BOTTOM {
            return NodeId::BOTTOM;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&r) = self.caches_mut().intersect.get(&key) {
            return r;
        }
        if let Some(pos) = visiting.iter().rposition(|&k| k == key) {
            return self.mk_var((visiting.len() - 1 - pos) as u32);
        }
        visiting.push(key);
        let ea = self.unfolded_edges(a);
        let eb = self.unfolded_edges(b);
        let mut out = Vec::new();
        // Both edge lists are sorted by symbol first: pair up equal-symbol runs.
        let (mut i, mut j) = (0, 0);
        while i < ea.len() && j < eb.len() {
            let (sa, sb) = (ea[i].symbol(), eb[j].symbol());
            if sa < sb {
                i += 1;
            } else if sb < sa {
                j += 1;
            } else {
                let i_end = i + ea[i..].iter().take_while(|e| e.symbol() == sa).count();
                let j_end = j + eb[j..].iter().take_while(|e| e.symbol() == sb).count();
                for x in &ea[i..i_end] {
                    for y in &eb[j..j_end] {
                        if let Some(e) = self.intersect_edges(x, y, visiting) {
                            out.push(e);
                        }
                    }
                }
                i = i_end;
                j = j_end;
            }
        }
        visiting.pop();
        let out = self.drop_redundant_edges(out);
        let body = self.mk_node(out);
        let r = self.mk_mu(body);
        if self.is_closed(r) {
            let r = if self.is_cyclic(r) { self.normalize(r) } else { r };
            self.caches_mut().intersect.insert(key, r);
            r
        } else {
            r
        }
    }

    /// Whether `a` denotes a subset of `b`, as far as a cheap check can tell:
    /// equal nodes, or closed nodes whose intersection is `a` itself.
    fn known_subset(&mut self, a: NodeId, b: NodeId) -> bool {
        a == b || (self.is_closed(a) && self.is_closed(b) && self.intersect(a, b) == a)
    }

    /// `x` is redundant next to `y` when it has the same symbol, implies
    /// `y`'s constraints and has children inside `y`'s.
    fn edge_subsumed(&mut self, x: &Edge, y: &Edge) -> bool {
        x.symbol() == y.symbol()
            && x.constraints().implies(y.constraints())
            && x.children().iter().zip(y.children()).all(|(&a, &b)| self.known_subset(a, b))
    }

    /// Removes edges whose language another edge of the list already covers.
    /// Of two edges covering each other the earlier stays.
    pub(crate) fn drop_redundant_edges(&mut self, mut edges: Vec<Edge>) -> Vec<Edge> {
        edges.sort();
        edges.dedup();
        let mut keep = vec![true; edges.len()];
        let mut start = 0;
        while start < edges.len() {
            let end = start + edges[start..].iter().take_while(|e| e.symbol() == edges[start].symbol()).count();
            for i in start..end {
                for j in start..end {
                    if i == j || !keep[j] || !keep[i] {
                        continue;
                    }
                    if self.edge_subsumed(&edges[i], &edges[j]) && (j < i || !self.edge_subsumed(&edges[j], &edges[i])) {
                        keep[i] = false;
                    }
                }
            }
            start = end;
        }
        edges.into_iter().zip(keep).filter_map(|(e, k)| k.then_some(e)).collect()
    }

    fn intersect_edges(&mut self, x: &Edge, y: &Edge, visiting: &mut Vec<(NodeId, NodeId)>) -> Option<Edge> {
        let pcs = self.combine_constraints(x.constraints(), y.constraints())?;
        let mut children = Vec::with_capacity(x.arity());
        for (&c1, &c2) in x.children().iter().zip(y.children()) {
            let c = self.intersect_in(c1, c2, visiting);
            if c == NodeId::BOTTOM {
                return None;
            }
            children.push(c);
        }
        Some(Edge::raw(x.symbol().clone(), children, pcs))
    }

    /// Nodes reachable from `n` along `p`, unfolding recursive nodes on the way.
    pub fn nodes_at(&mut self, n: NodeId, p: &Path) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        self.collect_at(n, p.indices(), &mut out);
        out
    }

    pub fn nodes_at_edge(&mut self, e: &Edge, p: &Path) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        if let Some((&j, rest)) = p.indices().split_first() {
            if let Some(&c) = e.children().get(j as usize) {
                self.collect_at(c, rest, &mut out);
            }
        }
        out
    }

    fn collect_at(&mut self, n: NodeId, p: &[u32], out: &mut BTreeSet<NodeId>) {
        let Some((&j, rest)) = p.split_first() else {
            out.insert(n);
            return;
        };
        let u = self.unfold(n);
        let children: Vec<NodeId> =
            self.edges(u).iter().filter_map(|e| e.children().get(j as usize).copied()).collect();
        for c in children {
            self.collect_at(c, rest, out);
        }
    }

    /// Union of the nodes at `p`.
    pub fn subautomaton_at(&mut self, n: NodeId, p: &Path) -> NodeId {
        let ns = self.nodes_at(n, p);
        self.union_all(ns)
    }

    pub fn subautomaton_at_edge(&mut self, e: &Edge, p: &Path) -> NodeId {
        let ns = self.nodes_at_edge(e, p);
        self.union_all(ns)
    }

    /// Replaces every node reachable along `p` with its intersection with `m`.
    /// Branches too narrow for `p` are dropped.
    pub fn intersect_at_path(&mut self, n: NodeId, p: &Path, m: NodeId) -> NodeId {
        let mut memo = HashMap::new();
        self.intersect_at(n, p.indices(), m, &mut memo)
    }

    /// Edge form of [`Store::intersect_at_path`]; `None` is the empty edge.
    /// The root path leaves the edge unchanged.
    pub fn intersect_edge_at_path(&mut self, e: &Edge, p: &Path, m: NodeId) -> Option<Edge> {
        let mut memo = HashMap::new();
        self.intersect_edge_at(e, p.indices(), m, &mut memo)
    }

    fn intersect_edge_at(
        &mut self,
        e: &Edge,
        p: &[u32],
        m: NodeId,
        memo: &mut HashMap<(NodeId, usize), NodeId>,
    ) -> Option<Edge> {
        let Some((&j, rest)) = p.split_first() else { return Some(e.clone()) };
        let &c = e.children().get(j as usize)?;
        let c2 = self.intersect_at(c, rest, m, memo);
        if c2 == NodeId::BOTTOM {
            return None;
        }
        let mut ch = e.children().to_vec();
        ch[j as usize] = c2;
        Some(e.with_children(ch))
    }

    fn intersect_at(&mut self, n: NodeId, p: &[u32], m: NodeId, memo: &mut HashMap<(NodeId, usize), NodeId>) -> NodeId {
        if p.is_empty() {
            return self.intersect(n, m);
        }
        if let Some(&r) = memo.get(&(n, p.len())) {
            return r;
        }
        let edges = self.unfolded_edges(n);
        let mut out = Vec::with_capacity(edges.len());
        for e in &edges {
            if let Some(e2) = self.intersect_edge_at(e, p, m, memo) {
                out.push(e2);
            }
        }
        let r = self.mk_node(out);
        memo.insert((n, p.len()), r);
        r
    }

    /// Edges of `n` with their constraints, after unfolding.
    pub fn constrained_edges(&mut self, n: NodeId) -> Vec<(usize, Pcs)> {
        self.unfolded_edges(n)
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.constraints().is_empty())
            .map(|(i, e)| (i, e.constraints().clone()))
            .collect()
    }

    pub fn is_plain(&self, n: NodeId) -> bool {
        matches!(self.node(n), Node::Plain(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::Pec;

    fn pcs1(a: &[u32], b: &[u32]) -> Pcs {
        Pcs::normalize([Pec::new([Path::from(a), Path::from(b)])])
    }

    fn nat(s: &mut Store) -> NodeId {
        let x = s.mk_var(0);
        let succ = s.edge("S", vec![x], Pcs::empty());
        let zero = s.edge("Z", vec![], Pcs::empty());
        let body = s.node_of([succ, zero]);
        s.mk_mu(body)
    }

    #[test]
    fn union_identities() {
        let mut s = Store::new();
        let a = s.leaf("a");
        let b = s.leaf("b");
        assert_eq!(s.union(a, NodeId::BOTTOM), a);
        assert_eq!(s.union(a, a), a);
        let ab = s.union(a, b);
        assert_eq!(s.edges(ab).len(), 2);
    }

    #[test]
    fn intersect_identities() {
        let mut s = Store::new();
        let a = s.leaf("a");
        let b = s.leaf("b");
        assert_eq!(s.intersect(a, NodeId::BOTTOM), NodeId::BOTTOM);
        assert_eq!(s.intersect(a, b), NodeId::BOTTOM);
        let ab = s.union(a, b);
        assert_eq!(s.intersect(ab, a), a);
    }

    #[test]
    fn intersect_keeps_constraints_and_drops_conflicts() {
        let mut s = Store::new();
        let a = s.leaf("a");
        let c1 = pcs1(&[0], &[1, 0]);
        let c2 = pcs1(&[0, 0], &[1]);
        let fa = s.edge("f", vec![a], Pcs::empty());
        let fa = s.node_of([fa]);
        let left = s.edge("g", vec![fa, fa], c1.clone());
        let left = s.node_of([left]);
        let right = s.edge("g", vec![fa, fa], c2);
        let right = s.node_of([right]);
        // The union of the two constraint sets is inconsistent.
        assert_eq!(s.intersect(left, right), NodeId::BOTTOM);
        let plain = s.edge("g", vec![fa, fa], Pcs::empty());
        let plain = s.node_of([plain]);
        let r = s.intersect(left, plain);
        assert_eq!(s.edges(r)[0].constraints(), &c1);
    }

    #[test]
    fn intersection_drops_covered_edges() {
        let mut s = Store::new();
        let a = s.leaf("a");
        let b = s.leaf("b");
        let ab = s.union(a, b);
        let free = s.edge("g", vec![ab, ab], Pcs::empty());
        let tied = s.edge("g", vec![ab, ab], pcs1(&[0], &[1]));
        let narrow = s.edge("g", vec![a, ab], Pcs::empty());
        let left = s.node_of([free.clone()]);
        let right = s.node_of([free, tied, narrow]);
        let r = s.intersect(left, right);
        assert_eq!(s.edges(r).len(), 1);
        assert!(s.edges(r)[0].constraints().is_empty());
        assert_eq!(s.denote_bounded(r, 2).len(), 4);
    }

    #[test]
    fn nat_meets_nat() {
        let mut s = Store::new();
        let n = nat(&mut s);
        assert_eq!(s.intersect(n, n), n);
        // A structurally different copy: μx.{S(S(x)) , S(Z), Z} denotes all naturals too.
        let x = s.mk_var(0);
        let sx = s.edge("S", vec![x], Pcs::empty());
        let sx = s.node_of([sx]);
        let ssx = s.edge("S", vec![sx], Pcs::empty());
        let z = s.leaf("Z");
        let sz = s.edge("S", vec![z], Pcs::empty());
        let zz = s.edge("Z", vec![], Pcs::empty());
        let body = s.node_of([ssx, sz, zz]);
        let other = s.mk_mu(body);
        let r = s.intersect(n, other);
        assert!(s.is_cyclic(r));
        assert_ne!(r, NodeId::BOTTOM);
    }

    #[test]
    fn nodes_at_out_of_arity_is_empty() {
        let mut s = Store::new();
        let a = s.leaf("a");
        let f = s.edge("f", vec![a], Pcs::empty()).unwrap();
        assert!(s.nodes_at_edge(&f, &Path::from([3, 0])).is_empty());
        assert_eq!(s.nodes_at(a, &Path::root()), BTreeSet::from([a]));
    }

    #[test]
    fn nodes_at_through_recursion() {
        let mut s = Store::new();
        let n = nat(&mut s);
        let z = s.leaf("Z");
        let at = s.nodes_at(n, &Path::from([0, 0]));
        assert_eq!(at, BTreeSet::from([n]));
        let sub = s.subautomaton_at(n, &Path::from([0]));
        assert_eq!(sub, n);
        assert!(s.nodes_at(z, &Path::from([0])).is_empty());
    }
}
