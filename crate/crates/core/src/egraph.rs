//! Congruence closure over paths.
//!
//! Every path is a term built from the root by unary "take child i" steps, so
//! the closure of a constraint set is a union-find over path nodes in which
//! merging two classes also merges their same-index children. The constraint
//! set is consistent exactly when the quotient graph has no cycle.

use std::collections::{BTreeMap, HashMap};

use crate::pcs::{Pcs, Pec};
use crate::term::{Path, Symbol, Term};

/// Closed e-graph for one constraint set.
#[derive(Clone, Debug)]
pub struct PathEGraph {
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    parent: Vec<usize>,
    /// Child-class table, only meaningful at representatives.
    children: Vec<BTreeMap<u32, usize>>,
    explicit: Vec<usize>,
}

impl PathEGraph {
    fn empty() -> PathEGraph {
        let mut g = PathEGraph {
            paths: Vec::new(),
            index: HashMap::new(),
            parent: Vec::new(),
            children: Vec::new(),
            explicit: Vec::new(),
        };
        g.add(&Path::root());
        g
    }

    /// Builds the closure of `pcs`.
    pub fn closure(pcs: &Pcs) -> PathEGraph {
        let mut g = PathEGraph::empty();
        for c in pcs.classes() {
            let ids: Vec<usize> = c.paths().iter().map(|p| g.add(p)).collect();
            g.explicit.extend(ids.iter().copied());
            for w in ids.windows(2) {
                g.merge(w[0], w[1]);
            }
        }
        g.explicit.sort_unstable();
        g.explicit.dedup();
        g
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn find_mut(&mut self, x: usize) -> usize {
        let r = self.find(x);
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn add(&mut self, p: &Path) -> usize {
        if let Some(&id) = self.index.get(p) {
            return id;
        }
        let id = self.paths.len();
        self.paths.push(p.clone());
        self.index.insert(p.clone(), id);
        self.parent.push(id);
        self.children.push(BTreeMap::new());
        if let Some((&last, init)) = p.indices().split_last() {
            let up = self.add(&Path::from(init));
            let r = self.find_mut(up);
            match self.children[r].get(&last) {
                Some(&sibling) => self.merge(id, sibling),
                None => {
                    self.children[r].insert(last, id);
                }
            }
        }
        id
    }

    fn merge(&mut self, a: usize, b: usize) {
        let mut work = vec![(a, b)];
        while let Some((a, b)) = work.pop() {
            let (ra, rb) = (self.find_mut(a), self.find_mut(b));
            if ra == rb {
                continue;
            }
            self.parent[rb] = ra;
            let moved = std::mem::take(&mut self.children[rb]);
            for (i, cb) in moved {
                match self.children[ra].get(&i) {
                    Some(&ca) => work.push((ca, cb)),
                    None => {
                        self.children[ra].insert(i, cb);
                    }
                }
            }
        }
    }

    /// Number of equivalence classes among the materialized path nodes.
    pub fn class_count(&self) -> usize {
        (0..self.paths.len()).filter(|&i| self.find(i) == i).count()
    }

    /// Follows `p` through the class graph; returns the class reached and
    /// the suffix of `p` that leaves the materialized graph.
    fn resolve<'p>(&self, p: &'p Path) -> (usize, &'p [u32]) {
        let mut c = self.find(0);
        let idx = p.indices();
        for (k, i) in idx.iter().enumerate() {
            match self.children[c].get(i) {
                Some(&n) => c = self.find(n),
                None => return (c, &idx[k..]),
            }
        }
        (c, &[])
    }

    /// Whether `p = q` is derivable from the closure. Works for any paths,
    /// including ones outside the materialized graph.
    pub fn equivalent(&self, p: &Path, q: &Path) -> bool {
        self.resolve(p) == self.resolve(q)
    }

    /// True iff the quotient graph is acyclic.
    pub fn is_acyclic(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let n = self.paths.len();
        let mut mark = vec![Mark::New; n];
        for start in 0..n {
            let start = self.find(start);
            if mark[start] != Mark::New {
                continue;
            }
            // Iterative DFS with an explicit child cursor.
            let mut stack: Vec<(usize, Vec<usize>)> = Vec::new();
            mark[start] = Mark::Active;
            stack.push((start, self.child_classes(start)));
            while let Some((_, pending)) = stack.last_mut() {
                match pending.pop() {
                    Some(c) => match mark[c] {
                        Mark::Active => return false,
                        Mark::Done => {}
                        Mark::New => {
                            mark[c] = Mark::Active;
                            let kids = self.child_classes(c);
                            stack.push((c, kids));
                        }
                    },
                    None => {
                        let (c, _) = stack.pop().unwrap();
                        mark[c] = Mark::Done;
                    }
                }
            }
        }
        true
    }

    fn child_classes(&self, c: usize) -> Vec<usize> {
        self.children[c].values().map(|&x| self.find(x)).collect()
    }

    /// The closure restricted to the paths that appeared in the input.
    pub fn explicit_pcs(&self) -> Pcs {
        let mut groups: BTreeMap<usize, Vec<Path>> = BTreeMap::new();
        for &id in &self.explicit {
            groups.entry(self.find(id)).or_default().push(self.paths[id].clone());
        }
        Pcs::normalize(groups.into_values().map(Pec::new))
    }

    /// Builds a term satisfying the constraints, or `None` if they are
    /// inconsistent. Classes with outgoing child steps become `f` nodes with
    /// arity one past the largest child index in the graph; the rest are `a`.
    pub fn witness(&self) -> Option<Term> {
        if !self.is_acyclic() {
            return None;
        }
        let arity = self
            .children
            .iter()
            .flat_map(|m| m.keys())
            .map(|&i| i as usize + 1)
            .max()
            .unwrap_or(0);
        let f = Symbol::new("f", arity);
        let mut memo: HashMap<usize, Term> = HashMap::new();
        Some(self.witness_of(self.find(0), &f, &mut memo))
    }

    fn witness_of(&self, c: usize, f: &Symbol, memo: &mut HashMap<usize, Term>) -> Term {
        if let Some(t) = memo.get(&c) {
            return t.clone();
        }
        let t = if self.children[c].is_empty() {
            Term::leaf("a")
        } else {
            let kids = (0..f.arity() as u32)
                .map(|i| match self.children[c].get(&i) {
                    Some(&n) => self.witness_of(self.find(n), f, memo),
                    None => Term::leaf("a"),
                })
                .collect();
            Term::new(f.clone(), kids)
        };
        memo.insert(c, t.clone());
        t
    }
}

/// Free-function form of [`PathEGraph::closure`].
pub fn pcs_closure(pcs: &Pcs) -> PathEGraph {
    PathEGraph::closure(pcs)
}

/// Whether some term satisfies every class of `pcs`.
pub fn pcs_consistent(pcs: &Pcs) -> bool {
    PathEGraph::closure(pcs).is_acyclic()
}

/// Closes `pcs` and restricts the result to its own paths; `None` when inconsistent.
pub fn close_explicit(pcs: &Pcs) -> Option<Pcs> {
    let g = PathEGraph::closure(pcs);
    g.is_acyclic().then(|| g.explicit_pcs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pcs(classes: &[&[&[u32]]]) -> Pcs {
        Pcs::normalize(classes.iter().map(|c| Pec::new(c.iter().map(|p| Path::from(*p)))))
    }

    #[test]
    fn worked_consistency_examples() {
        assert!(!pcs_consistent(&pcs(&[&[&[0], &[1, 0]], &[&[0, 0], &[1]]])));
        assert!(pcs_consistent(&pcs(&[&[&[0, 0], &[1, 0]]])));
        assert!(!pcs_consistent(&pcs(&[&[&[1, 0, 0], &[1]]])));
        assert!(pcs_consistent(&Pcs::empty()));
    }

    #[test]
    fn closure_of_simple_swap() {
        let g = pcs_closure(&pcs(&[&[&[0], &[1]]]));
        assert_eq!(g.class_count(), 2);
        assert!(g.is_acyclic());
        assert!(g.equivalent(&Path::from([0, 1, 1]), &Path::from([1, 1, 1])));
        assert!(!g.equivalent(&Path::from([0, 1]), &Path::from([1, 0])));
    }

    #[test]
    fn congruence_adds_implied_explicit_equalities() {
        // 0=1 forces 0.0=1.0, which joins the two remaining classes.
        let c = pcs(&[&[&[0], &[1]], &[&[0, 0], &[2]], &[&[1, 0], &[3]]]);
        let closed = close_explicit(&c).unwrap();
        assert_eq!(closed.to_string(), "{0=1;0.0=1.0=2=3}");
    }

    #[test]
    fn cyclic_closure_is_reported() {
        let g = pcs_closure(&pcs(&[&[&[0], &[1, 0]], &[&[0, 0], &[1]]]));
        assert!(!g.is_acyclic());
        assert!(g.witness().is_none());
    }

    #[test]
    fn witness_satisfies_constraints() {
        let c = pcs(&[&[&[0, 0], &[1, 0]], &[&[0, 1], &[2]]]);
        let t = pcs_closure(&c).witness().unwrap();
        assert!(c.satisfied_by(&t), "{t}");
    }
}
