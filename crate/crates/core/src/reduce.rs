//! Static reduction: shrinking each constrained edge so that every choice at
//! one constrained position has a matching counterpart at the others.

use std::collections::HashMap;

use crate::pcs::Pec;
use crate::store::{Edge, Node, NodeId, Store};

/// Which per-class reduction to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReductionAlgo {
    /// Intersect every position with the meet of all positions.
    Basic,
    /// Intersect each position with the meet of the *other* positions.
    #[default]
    Optimized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ReductionReport {
    pub rounds_run: usize,
    /// Drop in the number of reachable edges, clamped at zero.
    pub edges_removed: usize,
    pub converged: bool,
}

/// Round limit used when none is given.
pub const DEFAULT_MAX_ROUNDS: usize = 30;

impl Store {
    /// For every pair of positions in `c`, each node reachable at the first
    /// overlaps the subautomaton at the second.
    pub fn reduction_criterion_holds(&mut self, e: &Edge, c: &Pec) -> bool {
        let subs: Vec<NodeId> = c.paths().iter().map(|p| self.subautomaton_at_edge(e, p)).collect();
        for pi in c.paths() {
            for n in self.nodes_at_edge(e, pi) {
                for &sub in &subs {
                    if self.intersect(n, sub) == NodeId::BOTTOM {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `None` is the empty edge.
    pub fn reduce_pec_basic(&mut self, e: &Edge, c: &Pec) -> Option<Edge> {
        let mut meet: Option<NodeId> = None;
        for p in c.paths() {
            let sub = self.subautomaton_at_edge(e, p);
            meet = Some(match meet {
                None => sub,
                Some(m) => self.intersect(m, sub),
            });
        }
        let meet = meet.expect("classes are non-empty");
        let mut e = e.clone();
        for p in c.paths() {
            if p.is_root() {
                continue;
            }
            e = self.intersect_edge_at_path(&e, p, meet)?;
        }
        Some(e)
    }

    /// `None` is the empty edge.
    pub fn reduce_pec_optimized(&mut self, e: &Edge, c: &Pec) -> Option<Edge> {
        let k = c.len();
        if k < 2 {
            return Some(e.clone());
        }
        let subs: Vec<NodeId> = c.paths().iter().map(|p| self.subautomaton_at_edge(e, p)).collect();
        // before[i] is the meet of subs[..i], after[i] the meet of subs[i+1..].
        let mut before: Vec<Option<NodeId>> = vec![None; k];
        for i in 1..k {
            before[i] = Some(match before[i - 1] {
                None => subs[i - 1],
                Some(m) => self.intersect(m, subs[i - 1]),
            });
        }
        let mut after: Vec<Option<NodeId>> = vec![None; k];
        for i in (0..k - 1).rev() {
            after[i] = Some(match after[i + 1] {
                None => subs[i + 1],
                Some(m) => self.intersect(m, subs[i + 1]),
            });
        }
        let mut e = e.clone();
        for (i, p) in c.paths().iter().enumerate() {
            let others = match (before[i], after[i]) {
                (Some(a), Some(b)) => self.intersect(a, b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => unreachable!("at least two positions"),
            };
            if p.is_root() {
                continue;
            }
            e = self.intersect_edge_at_path(&e, p, others)?;
        }
        Some(e)
    }

    /// Reduces every class of the edge in canonical order.
    pub fn reduce_edge(&mut self, e: &Edge, algo: ReductionAlgo) -> Option<Edge> {
        let mut e = e.clone();
        let classes = e.constraints().classes().to_vec();
        for c in &classes {
            e = match algo {
                ReductionAlgo::Basic => self.reduce_pec_basic(&e, c)?,
                ReductionAlgo::Optimized => self.reduce_pec_optimized(&e, c)?,
            };
        }
        Some(e)
    }

    /// Optimized reduction of every constrained edge, repeated until nothing
    /// changes or `max_rounds` passes have run.
    pub fn reduce_fixpoint(&mut self, n: NodeId, max_rounds: usize) -> (NodeId, ReductionReport) {
        self.reduce_fixpoint_with(n, max_rounds, ReductionAlgo::Optimized)
    }

    pub fn reduce_fixpoint_with(&mut self, n: NodeId, max_rounds: usize, algo: ReductionAlgo) -> (NodeId, ReductionReport) {
        let before = self.edge_count(n);
        let mut cur = n;
        let mut report = ReductionReport::default();
        while report.rounds_run < max_rounds {
            let next = self.reduce_round(cur, algo);
            report.rounds_run += 1;
            if next == cur {
                report.converged = true;
                break;
            }
            cur = next;
        }
        report.edges_removed = before.saturating_sub(self.edge_count(cur));
        (cur, report)
    }

    /// One bottom-up pass over the DAG.
    pub fn reduce_round(&mut self, n: NodeId, algo: ReductionAlgo) -> NodeId {
        let mut memo = HashMap::new();
        self.reduce_node(n, algo, &mut memo)
    }

    fn reduce_node(&mut self, n: NodeId, algo: ReductionAlgo, memo: &mut HashMap<NodeId, NodeId>) -> NodeId {
        // Recursive nodes carry no constraints in finitely-constrained input.
        if !self.is_constrained(n) || !matches!(self.node(n), Node::Plain(_)) {
            return n;
        }
        if let Some(&r) = memo.get(&n) {
            return r;
        }
        let edges = self.edges(n).to_vec();
        let mut out = Vec::with_capacity(edges.len());
        for e in &edges {
            let children: Vec<NodeId> = e.children().iter().map(|&c| self.reduce_node(c, algo, memo)).collect();
            if children.contains(&NodeId::BOTTOM) {
                continue;
            }
            let e = e.with_children(children);
            if let Some(e) = self.reduce_edge(&e, algo) {
                out.push(e);
            }
        }
        let r = self.mk_node(out);
        memo.insert(n, r);
        r
    }
}
