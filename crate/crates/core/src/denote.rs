//! Bounded denotation: a brute-force oracle for what a node accepts.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::store::{NodeId, Store};
use crate::term::Term;

type Memo = HashMap<(NodeId, usize), Rc<BTreeSet<Term>>>;

impl Store {
    /// All terms of depth at most `max_depth` accepted by `n`. Constraints are
    /// checked on every edge as its terms are built.
    pub fn denote_bounded(&mut self, n: NodeId, max_depth: usize) -> BTreeSet<Term> {
        let mut memo = Memo::new();
        let r = self.denote_in(n, max_depth, &mut memo);
        Rc::try_unwrap(r).unwrap_or_else(|rc| (*rc).clone())
    }

    fn denote_in(&mut self, n: NodeId, depth: usize, memo: &mut Memo) -> Rc<BTreeSet<Term>> {
        if depth == 0 || n == NodeId::BOTTOM {
            return Rc::new(BTreeSet::new());
        }
        if let Some(r) = memo.get(&(n, depth)) {
            return r.clone();
        }
        let mut out = BTreeSet::new();
        for e in self.unfolded_edges(n) {
            let kids: Vec<Rc<BTreeSet<Term>>> =
                e.children().iter().map(|&c| self.denote_in(c, depth - 1, memo)).collect();
            if kids.iter().any(|k| k.is_empty()) {
                continue;
            }
            let kid_lists: Vec<Vec<&Term>> = kids.iter().map(|k| k.iter().collect()).collect();
            for combo in product(&kid_lists) {
                let t = Term::new(e.symbol().clone(), combo.into_iter().cloned().collect());
                if e.constraints().satisfied_by(&t) {
                    out.insert(t);
                }
            }
        }
        let r = Rc::new(out);
        memo.insert((n, depth), r.clone());
        r
    }
}

/// Cartesian product of the lists, in odometer order.
pub(crate) fn product<'a, T>(lists: &[Vec<&'a T>]) -> Vec<Vec<&'a T>> {
    let mut out: Vec<Vec<&'a T>> = vec![Vec::new()];
    for l in lists {
        let mut next = Vec::with_capacity(out.len() * l.len());
        for prefix in &out {
            for &x in l {
                let mut v = prefix.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::{Pcs, Pec};
    use crate::term::Path;

    #[test]
    fn bottom_denotes_nothing() {
        let mut s = Store::new();
        assert!(s.denote_bounded(NodeId::BOTTOM, 5).is_empty());
    }

    #[test]
    fn nat_unfolding_preserves_denotation() {
        let mut s = Store::new();
        let x = s.mk_var(0);
        let succ = s.edge("S", vec![x], Pcs::empty());
        let zero = s.edge("Z", vec![], Pcs::empty());
        let body = s.node_of([succ, zero]);
        let nat = s.mk_mu(body);
        let once = s.unfold(nat);
        let d = s.denote_bounded(nat, 6);
        assert_eq!(d.len(), 6);
        assert_eq!(s.denote_bounded(once, 6), d);
        let twice = {
            let es = s.unfolded_edges(once);
            let es = es
                .into_iter()
                .map(|e| {
                    let ch = e.children().iter().map(|&c| s.unfold(c)).collect();
                    e.with_children(ch)
                })
                .collect();
            s.mk_node(es)
        };
        assert_eq!(s.denote_bounded(twice, 6), d);
    }

    #[test]
    fn constraints_filter_during_construction() {
        let mut s = Store::new();
        let a = s.leaf("a");
        let b = s.leaf("b");
        let ab = s.union(a, b);
        let pec = Pec::new([Path::from([0]), Path::from([1])]);
        let e = s.edge("p", vec![ab, ab], Pcs::normalize([pec]));
        let n = s.node_of([e]);
        let d = s.denote_bounded(n, 2);
        let shown: Vec<String> = d.iter().map(|t| t.to_string()).collect();
        assert_eq!(shown, ["p(a,a)", "p(b,b)"]);
        assert!(s.denote_bounded(n, 1).is_empty());
    }
}
