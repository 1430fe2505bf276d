//! Cross-checking enumeration against bounded denotation.

use std::collections::BTreeSet;

use crate::enumerate::{enumerate, expand_bounded, EnumConfig, EnumStats};
use crate::store::{NodeId, Store};
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub depth: usize,
    pub enumerated: usize,
    pub denoted: usize,
    /// Produced by enumeration but not accepted.
    pub unsound: Vec<Term>,
    /// Accepted but never produced by enumeration.
    pub missing: Vec<Term>,
    pub stats: EnumStats,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.unsound.is_empty() && self.missing.is_empty() && self.stats.measure_violations == 0
    }
}

/// Enumerates `n`, expands every state to depth `depth`, and compares with
/// the terms of that depth `n` accepts.
pub fn oracle_check(store: &mut Store, n: NodeId, depth: usize) -> OracleReport {
    oracle_check_pair(store, n, n, depth)
}

/// Like [`oracle_check`] but enumerates `enumerated` and denotes `reference`,
/// so a deliberately altered automaton can be checked against the original.
pub fn oracle_check_pair(store: &mut Store, enumerated: NodeId, reference: NodeId, depth: usize) -> OracleReport {
    let config = EnumConfig { audit: true, ..EnumConfig::default() };
    let mut it = enumerate(store, enumerated, config);
    let states: Vec<_> = it.by_ref().collect();
    let stats = it.stats();
    let mut got = BTreeSet::new();
    for st in &states {
        got.extend(expand_bounded(store, st, depth));
    }
    let want = store.denote_bounded(reference, depth);
    OracleReport {
        depth,
        enumerated: got.len(),
        denoted: want.len(),
        unsound: got.difference(&want).cloned().collect(),
        missing: want.difference(&got).cloned().collect(),
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pcs::Pcs;

    #[test]
    fn fixtures_pass() {
        let mut s = Store::new();
        let n = fixtures::typed_application(&mut s);
        assert!(oracle_check(&mut s, n, 4).passed());
        assert!(oracle_check(&mut s, NodeId::BOTTOM, 4).passed());
    }

    #[test]
    fn corrupted_constraint_is_caught() {
        let mut s = Store::new();
        let n = fixtures::typed_application(&mut s);
        let e = s.edges(n)[0].with_constraints("0.1=1.0".parse::<Pcs>().unwrap());
        let corrupted = s.mk_node(vec![e]);
        let report = oracle_check_pair(&mut s, corrupted, n, 4);
        assert!(!report.passed());
        assert!(!report.unsound.is_empty() || !report.missing.is_empty());
    }
}
