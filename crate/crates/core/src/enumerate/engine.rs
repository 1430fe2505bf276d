//! The backtracking driver.

use std::sync::Arc;
use std::time::Instant;

use super::measure::Measure;
use super::rules::{all_suspendable, step_choose, step_choose_mu, step_subst, step_suspend, Location, Outcome};
use super::state::{EnumState, PTerm};
use crate::store::{NodeId, Store};

/// A u-node the driver could expand next.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub location: Location,
    pub node: NodeId,
    pub fragments: usize,
    /// Edges of the node, or 1 for a recursive node (which is only unfolded).
    pub alternatives: usize,
}

/// Picks the next u-node to expand. Every choice is complete; the order
/// only affects how much work is done.
pub trait Scheduler: Send + Sync {
    fn pick(&self, candidates: &[Candidate]) -> usize;
}

/// Built-in target orders. Candidates are listed binding by binding (root
/// first, then by variable id), preorder left to right inside each binding.
#[derive(Clone, Default)]
pub enum Schedule {
    /// The first candidate.
    #[default]
    DfsLeftRight,
    /// The last candidate.
    RightToLeft,
    /// The candidate with the fewest alternatives, earliest on ties.
    FewestAlternatives,
    Custom(Arc<dyn Scheduler>),
}

impl std::fmt::Debug for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Schedule::DfsLeftRight => f.write_str("DfsLeftRight"),
            Schedule::RightToLeft => f.write_str("RightToLeft"),
            Schedule::FewestAlternatives => f.write_str("FewestAlternatives"),
            Schedule::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl Schedule {
    fn pick(&self, candidates: &[Candidate]) -> usize {
        match self {
            Schedule::DfsLeftRight => 0,
            Schedule::RightToLeft => candidates.len() - 1,
            Schedule::FewestAlternatives => candidates
                .iter()
                .enumerate()
                .min_by_key(|(i, c)| (c.alternatives, *i))
                .map(|(i, _)| i)
                .unwrap_or(0),
            Schedule::Custom(s) => s.pick(candidates),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumConfig {
    /// Stop after this many fully enumerated states; 0 yields nothing.
    pub limit: usize,
    pub schedule: Schedule,
    pub deadline: Option<Instant>,
    /// Stop after exploring this many states.
    pub max_states: Option<u64>,
    /// Check the progress measure around every rule application.
    pub audit: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { limit: usize::MAX, schedule: Schedule::default(), deadline: None, max_states: None, audit: false }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    /// States created: the initial one plus one per alternative tried.
    pub states_explored: u64,
    pub rule_applications: u64,
    pub dead_branches: u64,
    pub yielded: u64,
    /// Rule applications after which the progress measure did not drop.
    pub measure_violations: u64,
    /// Expansion attempts under an unsolved variable (should stay zero).
    pub premature_choices: u64,
    pub stopped_early: bool,
}

struct ChoicePoint {
    state: EnumState,
    measure: Option<Measure>,
    location: Location,
    next: usize,
    total: usize,
}

/// Lazily yields the fully enumerated states of a node.
pub struct Enumerator<'s> {
    store: &'s mut Store,
    config: EnumConfig,
    /// The next state to run, with its measure when auditing.
    pending: Option<(EnumState, Option<Measure>)>,
    choices: Vec<ChoicePoint>,
    stats: EnumStats,
}

/// Starts enumerating `root`, which must be finitely constrained. The root is
/// normalized first.
pub fn enumerate(store: &mut Store, root: NodeId, config: EnumConfig) -> Enumerator<'_> {
    let root = store.normalize(root);
    let mut stats = EnumStats::default();
    let mut pending = None;
    if root != NodeId::BOTTOM && config.limit > 0 {
        let st = EnumState::new(root);
        let m = config.audit.then(|| Measure::of(store, &st));
        pending = Some((st, m));
        stats.states_explored = 1;
    }
    Enumerator { store, config, pending, choices: Vec::new(), stats }
}

enum Step {
    Yield(EnumState),
    Dead,
    Branch(EnumState, Candidate, Option<Measure>),
}

impl<'s> Enumerator<'s> {
    pub fn stats(&self) -> EnumStats {
        self.stats
    }

    pub fn store(&mut self) -> &mut Store {
        self.store
    }

    fn out_of_budget(&mut self) -> bool {
        let over_time = self.config.deadline.is_some_and(|d| Instant::now() >= d);
        let over_states = self.config.max_states.is_some_and(|m| self.stats.states_explored >= m);
        if over_time || over_states {
            self.stats.stopped_early = true;
        }
        self.stats.stopped_early
    }

    /// Measures `after` and checks it against `before`, which measured the
    /// state before the rule. Returns the new measure.
    fn audit(&mut self, before: &Option<Measure>, after: &EnumState) -> Option<Measure> {
        let before = before.as_ref()?;
        let now = Measure::of(self.store, after);
        if now >= *before {
            self.stats.measure_violations += 1;
            debug_assert!(false, "progress measure did not decrease");
        }
        Some(now)
    }

    /// Applies deterministic rules until a real choice, a result, or a dead
    /// end. `measure` is the measure of `st` when auditing.
    fn run(&mut self, mut st: EnumState, mut measure: Option<Measure>) -> Step {
        loop {
            let pending = all_suspendable(&st);
            if !pending.is_empty() {
                for loc in &pending {
                    match step_suspend(self.store, &mut st, loc) {
                        Ok(Outcome::Dead) => return Step::Dead,
                        Ok(Outcome::Live) => {
                            self.stats.rule_applications += 1;
                            measure = self.audit(&measure, &st);
                        }
                        // An earlier suspension in this batch already moved it.
                        Err(_) => {}
                    }
                }
                if step_subst(&mut st) {
                    self.stats.rule_applications += 1;
                    measure = self.audit(&measure, &st);
                }
                continue;
            }
            let candidates = self.candidates(&st);
            if candidates.is_empty() {
                return if st.is_fully_enumerated(self.store) { Step::Yield(st) } else { Step::Dead };
            }
            let c = candidates[self.config.schedule.pick(&candidates)].clone();
            if self.store.is_mu(c.node) {
                self.stats.rule_applications += 1;
                step_choose_mu(self.store, &mut st, &c.location).expect("restricted recursive node");
                measure = self.audit(&measure, &st);
                continue;
            }
            return Step::Branch(st, c, measure);
        }
    }

    fn candidates(&self, st: &EnumState) -> Vec<Candidate> {
        let mentioned = st.mentioned_vars();
        let mut out = Vec::new();
        for (v, t) in st.bound_vars() {
            if mentioned.contains(&v) {
                continue;
            }
            t.visit(&mut |pos, s| {
                if let PTerm::UNode(n, fs) = s {
                    if EnumState::needs_enumeration(self.store, *n, fs) {
                        let alternatives = if self.store.is_mu(*n) { 1 } else { self.store.edges(*n).len() };
                        out.push(Candidate {
                            location: Location { var: v, pos: pos.to_vec() },
                            node: *n,
                            fragments: fs.len(),
                            alternatives,
                        });
                    }
                }
            });
        }
        out
    }

    /// Applies alternative `alt` of a choice to a copy of `st`; `None` when
    /// the alternative is dead at once.
    fn choose(&mut self, st: &EnumState, before: &Option<Measure>, loc: &Location, alt: usize) -> Option<(EnumState, Option<Measure>)> {
        let mut next = st.clone();
        self.stats.rule_applications += 1;
        self.stats.states_explored += 1;
        match step_choose(self.store, &mut next, loc, alt) {
            Ok(Outcome::Live) => {}
            Ok(Outcome::Dead) => {
                self.stats.dead_branches += 1;
                return None;
            }
            Err(_) => {
                self.stats.premature_choices += 1;
                debug_assert!(false, "choice rule rejected a candidate");
                return None;
            }
        }
        let after = self.audit(before, &next);
        Some((next, after))
    }
}

impl Iterator for Enumerator<'_> {
    type Item = EnumState;

    fn next(&mut self) -> Option<EnumState> {
        if self.stats.yielded as usize >= self.config.limit {
            return None;
        }
        loop {
            if self.out_of_budget() {
                return None;
            }
            let (st, measure) = match self.pending.take() {
                Some(p) => p,
                None => {
                    let cp = self.choices.last_mut()?;
                    let alt = cp.next;
                    cp.next += 1;
                    let (state, before, loc) = (cp.state.clone(), cp.measure.clone(), cp.location.clone());
                    if cp.next >= cp.total {
                        self.choices.pop();
                    }
                    match self.choose(&state, &before, &loc, alt) {
                        Some(p) => p,
                        None => continue,
                    }
                }
            };
            match self.run(st, measure) {
                Step::Yield(st) => {
                    self.stats.yielded += 1;
                    return Some(st);
                }
                Step::Dead => self.stats.dead_branches += 1,
                Step::Branch(st, c, measure) => {
                    let first = self.choose(&st, &measure, &c.location, 0);
                    if c.alternatives > 1 {
                        let total = c.alternatives;
                        self.choices.push(ChoicePoint { state: st, measure, location: c.location, next: 1, total });
                    }
                    self.pending = first;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::enumerate::expand::{expand, expand_bounded};
    use crate::fixtures;
    use crate::term::Term;

    fn audited() -> EnumConfig {
        EnumConfig { audit: true, ..EnumConfig::default() }
    }

    fn all_terms(store: &mut Store, root: NodeId, config: EnumConfig, depth: usize) -> (BTreeSet<Term>, EnumStats) {
        let mut it = enumerate(store, root, config);
        let states: Vec<EnumState> = it.by_ref().collect();
        let stats = it.stats();
        assert_eq!(stats.measure_violations, 0);
        assert_eq!(stats.premature_choices, 0);
        let mut out = BTreeSet::new();
        for st in &states {
            out.extend(expand_bounded(store, st, depth));
        }
        (out, stats)
    }

    #[test]
    fn duplicated_sum_yields_three_terms() {
        let mut s = Store::new();
        let n = fixtures::duplicated_sum(&mut s);
        let (terms, _) = all_terms(&mut s, n, audited(), 5);
        assert_eq!(terms, s.denote_bounded(n, 5));
        assert_eq!(terms.len(), 3);
    }

    #[test]
    fn typed_application_has_two_states() {
        let mut s = Store::new();
        let n = fixtures::typed_application(&mut s);
        let states: Vec<EnumState> = enumerate(&mut s, n, audited()).collect();
        assert_eq!(states.len(), 2);
        let terms: Vec<Term> = states.iter().flat_map(|st| expand(&mut s, st, 10)).collect();
        let want: Vec<Term> =
            ["app(g(Int,Bool),x(Int))", "app(h(Char,Int),y(Char))"].iter().map(|t| t.parse().unwrap()).collect();
        assert_eq!(terms, want);
    }

    #[test]
    fn polymorphic_query_finds_both_solutions() {
        let mut s = Store::new();
        let n = fixtures::polymorphic_query(&mut s);
        let (terms, stats) = all_terms(&mut s, n, audited(), 6);
        assert_eq!(terms.len(), 2, "{terms:?}");
        assert_eq!(terms, s.denote_bounded(n, 6));
        assert!(stats.dead_branches >= 1);
    }

    #[test]
    fn perfect_tree_is_one_compact_state() {
        let mut s = Store::new();
        for depth in 1..=6u32 {
            let n = fixtures::perfect_tree(&mut s, depth);
            let states: Vec<EnumState> = enumerate(&mut s, n, audited()).collect();
            assert_eq!(states.len(), 1);
            assert_eq!(states[0].size(), 3 * depth as usize + 1);
            let terms = expand(&mut s, &states[0], 100);
            assert_eq!(terms.len(), 2);
            assert!(terms.iter().all(|t| t.size() == (1 << (depth + 1)) - 1));
        }
    }

    #[test]
    fn offset_pair_slice_matches_denotation() {
        let mut s = Store::new();
        let n = fixtures::offset_pair(&mut s);
        let (terms, _) = all_terms(&mut s, n, audited(), 5);
        assert_eq!(terms, s.denote_bounded(n, 5));
        assert_eq!(terms.len(), 2);
    }

    #[test]
    fn schedules_agree() {
        let mut s = Store::new();
        let n = fixtures::polymorphic_query(&mut s);
        let mut sets = Vec::new();
        for schedule in [Schedule::DfsLeftRight, Schedule::RightToLeft, Schedule::FewestAlternatives] {
            let (terms, _) = all_terms(&mut s, n, EnumConfig { schedule, audit: true, ..EnumConfig::default() }, 6);
            sets.push(terms);
        }
        assert!(sets.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn limits_and_bottom() {
        let mut s = Store::new();
        let n = fixtures::typed_application(&mut s);
        assert_eq!(enumerate(&mut s, n, EnumConfig { limit: 1, ..EnumConfig::default() }).count(), 1);
        assert_eq!(enumerate(&mut s, n, EnumConfig { limit: 0, ..EnumConfig::default() }).count(), 0);
        assert_eq!(enumerate(&mut s, NodeId::BOTTOM, EnumConfig::default()).count(), 0);
        let unconstrained = s.leaf("a");
        let states: Vec<EnumState> = enumerate(&mut s, unconstrained, EnumConfig::default()).collect();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].display(), "v0 = <n2>\n".replace("n2", &unconstrained.to_string()));
    }
}
