//! Generate-and-test enumeration: walk the skeleton, unfolding recursive
//! nodes a bounded number of times, and discard terms that break a constraint.

use std::ops::ControlFlow;
use std::time::Instant;

use crate::store::{Edge, NodeId, Store};
use crate::term::Term;

/// How often a recursive node may be unfolded along one path.
pub const NAIVE_UNFOLD_DEPTH: u32 = 3;

#[derive(Clone, Debug)]
pub struct NaiveConfig {
    pub limit: usize,
    pub unfold_depth: u32,
    pub deadline: Option<Instant>,
    pub max_states: Option<u64>,
}

impl Default for NaiveConfig {
    fn default() -> Self {
        NaiveConfig { limit: usize::MAX, unfold_depth: NAIVE_UNFOLD_DEPTH, deadline: None, max_states: None }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NaiveStats {
    /// Edge choices made while building candidate terms.
    pub states_explored: u64,
    /// Candidate subterms rejected by a constraint.
    pub rejected: u64,
    pub yielded: u64,
    pub stopped_early: bool,
}

struct Walker<'a> {
    store: &'a mut Store,
    config: NaiveConfig,
    stats: NaiveStats,
}

type Cont<'k> = &'k mut dyn FnMut(&mut Walker<'_>, Term) -> ControlFlow<()>;

impl Walker<'_> {
    fn tick(&mut self) -> ControlFlow<()> {
        self.stats.states_explored += 1;
        let over_states = self.config.max_states.is_some_and(|m| self.stats.states_explored > m);
        let over_time = self.stats.states_explored % 1024 == 0
            && self.config.deadline.is_some_and(|d| Instant::now() >= d);
        if over_states || over_time {
            self.stats.stopped_early = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    }

    fn node(&mut self, n: NodeId, unfolds: u32, k: Cont<'_>) -> ControlFlow<()> {
        let mut n = n;
        let mut unfolds = unfolds;
        while self.store.is_mu(n) {
            if unfolds == 0 {
                return ControlFlow::Continue(());
            }
            unfolds -= 1;
            n = self.store.unfold(n);
        }
        let edges = self.store.edges(n).to_vec();
        for e in &edges {
            self.tick()?;
            self.children(e, unfolds, Vec::with_capacity(e.arity()), k)?;
        }
        ControlFlow::Continue(())
    }

    fn children(&mut self, e: &Edge, unfolds: u32, done: Vec<Term>, k: Cont<'_>) -> ControlFlow<()> {
        if done.len() == e.arity() {
            let t = Term::new(e.symbol().clone(), done);
            if e.constraints().satisfied_by(&t) {
                return k(self, t);
            }
            self.stats.rejected += 1;
            return ControlFlow::Continue(());
        }
        let child = e.children()[done.len()];
        self.node(child, unfolds, &mut |w: &mut Walker<'_>, t: Term| {
            let mut next = done.clone();
            next.push(t);
            w.children(e, unfolds, next, k)
        })
    }
}

/// Terms accepted by `root` within the unfolding bound, in generation order.
pub fn enumerate_naive(store: &mut Store, root: NodeId, config: NaiveConfig) -> (Vec<Term>, NaiveStats) {
    let mut out = Vec::new();
    let stats = enumerate_naive_each(store, root, config, |t| {
        out.push(t);
        ControlFlow::Continue(())
    });
    (out, stats)
}

/// Streaming form of [`enumerate_naive`]; `f` may stop the walk early.
pub fn enumerate_naive_each(
    store: &mut Store,
    root: NodeId,
    config: NaiveConfig,
    mut f: impl FnMut(Term) -> ControlFlow<()>,
) -> NaiveStats {
    let limit = config.limit;
    let unfolds = config.unfold_depth;
    let mut w = Walker { store, config, stats: NaiveStats::default() };
    if limit > 0 {
        let _ = w.node(root, unfolds, &mut |w: &mut Walker<'_>, t: Term| {
            w.stats.yielded += 1;
            let flow = f(t);
            if flow.is_break() || w.stats.yielded as usize >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
    }
    w.stats
}
