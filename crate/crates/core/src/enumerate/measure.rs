//! A well-founded measure on enumeration states, used to audit that every
//! rule application makes progress.
//!
//! The measure is a triple compared lexicographically:
//! the multiset of u-node heights, the multiset of fragment path lengths,
//! and the number of variable-to-variable bindings. Multisets are compared
//! as their descending sorted sequences, lexicographically; on histograms
//! that means comparing counts from the largest value down.

use std::cmp::Ordering;

use super::state::{EnumState, PTerm};
use crate::store::{Node, NodeId, Store};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    /// `heights[h]` counts u-nodes of height `h`; no trailing zeros.
    heights: Vec<u32>,
    path_lengths: Vec<u32>,
    aliases: usize,
}

fn bump(hist: &mut Vec<u32>, v: usize) {
    if hist.len() <= v {
        hist.resize(v + 1, 0);
    }
    hist[v] += 1;
}

fn cmp_multisets(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

impl PartialOrd for Measure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Measure {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_multisets(&self.heights, &other.heights)
            .then_with(|| cmp_multisets(&self.path_lengths, &other.path_lengths))
            .then_with(|| self.aliases.cmp(&other.aliases))
    }
}

impl Measure {
    pub fn of(store: &mut Store, st: &EnumState) -> Measure {
        let mut unodes = Vec::new();
        let mut path_lengths = Vec::new();
        let mut aliases = 0;
        for (v, t) in st.bound_vars() {
            if matches!(t, PTerm::Var(_)) && v != super::state::VarId::ROOT {
                aliases += 1;
            }
            t.visit(&mut |_, s| {
                if let PTerm::UNode(n, fs) = s {
                    let reach = fs.iter().map(|f| f.pec.max_len()).max().unwrap_or(0);
                    unodes.push((*n, reach as u32));
                    for f in fs {
                        for p in f.pec.paths().iter() {
                            bump(&mut path_lengths, p.len());
                        }
                    }
                }
            });
        }
        let mut heights = Vec::new();
        for (n, l) in unodes {
            bump(&mut heights, height(store, n, l) as usize);
        }
        Measure { heights, path_lengths, aliases }
    }
}

/// Height of `n` as seen by an enumeration that must still look `reach`
/// levels deep. Recursive nodes count only while some constraint reaches
/// into them; each layer of their unfolding adds one.
pub(crate) fn height(store: &mut Store, n: NodeId, reach: u32) -> u32 {
    if let Some(&h) = store.caches_mut().height.get(&(n, reach)) {
        return h;
    }
    let h = match store.node(n).clone() {
        Node::Bottom | Node::Var(_) => 0,
        Node::Mu(_) => {
            if reach == 0 {
                0
            } else {
                let u = store.unfold(n);
                1 + height(store, u, reach)
            }
        }
        Node::Plain(edges) => {
            let mut best = 0;
            for e in &edges {
                let r = reach.max(e.constraints().max_path_len() as u32).saturating_sub(1);
                let below = e.children().iter().map(|&c| height(store, c, r)).max().unwrap_or(0);
                best = best.max(1 + below);
            }
            best
        }
    };
    store.caches_mut().height.insert((n, reach), h);
    h
}
